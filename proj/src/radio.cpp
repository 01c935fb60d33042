#include "fihr/radio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fihr::radio {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("radio.") + field + " must be positive and finite");
}

void require_bits(std::uint64_t bits) {
  if (bits == 0) throw std::invalid_argument("bit count must be positive");
}

}  // namespace

void RadioParams::validate() const {
  require_positive(e_elec, "e_elec");
  require_positive(eps_fs, "eps_fs");
  require_positive(eps_mp, "eps_mp");
  require_positive(e_da, "e_da");
  if (!(eps_fs > eps_mp))
    throw std::invalid_argument("radio.eps_mp must be smaller than radio.eps_fs");
}

double crossover_distance(const RadioParams& p) { return std::sqrt(p.eps_fs / p.eps_mp); }

double tx_energy(const RadioParams& p, std::uint64_t bits, double d) {
  require_bits(bits);
  if (!(d >= 0.0)) throw std::invalid_argument("transmission distance must be non-negative");
  const double k = static_cast<double>(bits);
  if (d < crossover_distance(p)) return p.e_elec * k + p.eps_fs * k * d * d;
  return p.e_elec * k + p.eps_mp * k * (d * d) * (d * d);
}

double rx_energy(const RadioParams& p, std::uint64_t bits) {
  require_bits(bits);
  return p.e_elec * static_cast<double>(bits);
}

double aggregation_energy(const RadioParams& p, std::uint64_t bits, std::uint64_t signals) {
  require_bits(bits);
  if (signals == 0) throw std::invalid_argument("aggregation needs at least one signal");
  return p.e_da * static_cast<double>(bits) * static_cast<double>(signals);
}

}  // namespace fihr::radio
