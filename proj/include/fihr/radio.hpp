#pragma once

#include <cstdint>

namespace fihr::radio {

// First-order radio: free-space (d^2) amplifier below the crossover
// distance, multipath (d^4) above it.
struct RadioParams {
  double e_elec = 50e-9;     // J/bit, electronics (tx and rx)
  double eps_fs = 10e-12;    // J/bit/m^2
  double eps_mp = 0.004e-12; // J/bit/m^4
  double e_da = 5e-9;        // J/bit/signal, aggregation

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double crossover_distance(const RadioParams& p);

// bits > 0 and d >= 0, otherwise std::invalid_argument.
double tx_energy(const RadioParams& p, std::uint64_t bits, double d);
double rx_energy(const RadioParams& p, std::uint64_t bits);
double aggregation_energy(const RadioParams& p, std::uint64_t bits, std::uint64_t signals);

}  // namespace fihr::radio
