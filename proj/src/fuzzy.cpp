#include "fihr/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fihr::fuzzy {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

MembershipFunction MembershipFunction::triangular(double left, double peak, double right) {
  if (!finite(left) || !finite(peak) || !finite(right) || !(left < peak && peak < right))
    throw std::invalid_argument("triangular membership requires left < peak < right");
  return MembershipFunction(Triangular{left, peak, right});
}

MembershipFunction MembershipFunction::left_shoulder(double full_until, double zero_from) {
  if (!finite(full_until) || !finite(zero_from) || !(full_until < zero_from))
    throw std::invalid_argument("left-shoulder membership requires a < b");
  return MembershipFunction(LeftShoulder{full_until, zero_from});
}

MembershipFunction MembershipFunction::right_shoulder(double zero_until, double full_from) {
  if (!finite(zero_until) || !finite(full_from) || !(zero_until < full_from))
    throw std::invalid_argument("right-shoulder membership requires c < d");
  return MembershipFunction(RightShoulder{zero_until, full_from});
}

double MembershipFunction::operator()(double m) const {
  return std::visit(
      Overloaded{
          [m](const Triangular& t) {
            if (m <= t.left || m >= t.right) return 0.0;
            if (m <= t.peak) return (m - t.left) / (t.peak - t.left);
            return (t.right - m) / (t.right - t.peak);
          },
          [m](const LeftShoulder& s) {
            if (m <= s.full_until) return 1.0;
            if (m >= s.zero_from) return 0.0;
            return (s.zero_from - m) / (s.zero_from - s.full_until);
          },
          [m](const RightShoulder& s) {
            if (m <= s.zero_until) return 0.0;
            if (m >= s.full_from) return 1.0;
            return (m - s.zero_until) / (s.full_from - s.zero_until);
          },
      },
      shape_);
}

std::vector<double> MembershipFunction::breakpoints() const {
  return std::visit(Overloaded{
                        [](const Triangular& t) { return std::vector{t.left, t.peak, t.right}; },
                        [](const LeftShoulder& s) { return std::vector{s.full_until, s.zero_from}; },
                        [](const RightShoulder& s) { return std::vector{s.zero_until, s.full_from}; },
                    },
                    shape_);
}

std::vector<double> MembershipFunction::level_crossings(double level) const {
  return std::visit(
      Overloaded{
          [level](const Triangular& t) {
            return std::vector{t.left + level * (t.peak - t.left),
                               t.right - level * (t.right - t.peak)};
          },
          [level](const LeftShoulder& s) {
            return std::vector{s.zero_from - level * (s.zero_from - s.full_until)};
          },
          [level](const RightShoulder& s) {
            return std::vector{s.zero_until + level * (s.full_from - s.zero_until)};
          },
      },
      shape_);
}

double eval_membership(const MembershipFunction& mf, double m) { return mf(m); }

FuzzyVariable::FuzzyVariable(std::string name, double lo, double hi, std::vector<Term> terms)
    : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
  if (!finite(lo_) || !finite(hi_) || !(lo_ < hi_))
    throw std::invalid_argument("fuzzy variable '" + name_ + "': universe must satisfy lo < hi");
  if (terms_.empty())
    throw std::invalid_argument("fuzzy variable '" + name_ + "': no terms");

  std::set<std::string_view> seen;
  for (const auto& t : terms_)
    if (!seen.insert(t.label).second)
      throw std::invalid_argument("fuzzy variable '" + name_ + "': duplicate label '" + t.label +
                                  "'");

  // Coverage. The upper envelope is linear between consecutive knots, so it
  // vanishes somewhere in [lo, hi] only if it vanishes at a knot or at the
  // midpoint between two knots.
  std::vector<double> probes{lo_, hi_};
  for (const auto& t : terms_)
    for (double b : t.mf.breakpoints())
      if (b > lo_ && b < hi_) probes.push_back(b);
  std::sort(probes.begin(), probes.end());
  const std::size_t knots = probes.size();
  for (std::size_t i = 0; i + 1 < knots; ++i) probes.push_back(0.5 * (probes[i] + probes[i + 1]));
  for (double p : probes) {
    const bool covered =
        std::any_of(terms_.begin(), terms_.end(), [p](const Term& t) { return t.mf(p) > 0.0; });
    if (!covered)
      throw std::invalid_argument("fuzzy variable '" + name_ + "': no term covers " +
                                  std::to_string(p));
  }
}

double FuzzyVariable::clamp(double crisp) const {
  if (std::isnan(crisp)) throw std::invalid_argument("fuzzy variable '" + name_ + "': NaN input");
  return std::clamp(crisp, lo_, hi_);
}

std::size_t FuzzyVariable::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].label == label) return i;
  throw std::out_of_range("fuzzy variable '" + name_ + "' has no term '" + std::string(label) +
                          "'");
}

std::vector<Grade> FuzzyVariable::fuzzify(double crisp) const {
  const double m = clamp(crisp);
  std::vector<Grade> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.label, t.mf(m)});
  return out;
}

FuzzyVariable FuzzyVariable::with_term(std::string_view label, MembershipFunction mf) const {
  auto terms = terms_;
  terms[index_of(label)].mf = mf;
  return FuzzyVariable(name_, lo_, hi_, std::move(terms));
}

std::vector<Grade> fuzzify(const FuzzyVariable& v, double crisp) { return v.fuzzify(crisp); }

RuleBase::RuleBase(std::vector<Rule> rules, const FuzzyVariable& energy,
                   const FuzzyVariable& distance, const FuzzyVariable& comr)
    : rules_(std::move(rules)) {
  const std::size_t pairs = energy.terms().size() * distance.terms().size();
  if (rules_.size() != pairs || comr.terms().size() != pairs)
    throw std::invalid_argument("rule base must hold one rule per (energy, distance) pair and use "
                                "each output term once");

  std::set<std::pair<std::size_t, std::size_t>> antecedents;
  std::set<std::size_t> consequents;
  for (const auto& r : rules_) {
    const auto e = energy.index_of(r.energy);
    const auto d = distance.index_of(r.distance);
    const auto c = comr.index_of(r.comr);
    if (!antecedents.emplace(e, d).second)
      throw std::invalid_argument("rule base repeats antecedent (" + r.energy + ", " + r.distance +
                                  ")");
    if (!consequents.insert(c).second)
      throw std::invalid_argument("rule base uses consequent '" + r.comr + "' twice");
  }
}

std::vector<Rule> RuleBase::standard_rules() {
  std::vector<Rule> rules;
  std::size_t k = 0;
  for (auto d : kDistanceLabels)
    for (auto e : kEnergyLabels)
      rules.push_back({std::string(e), std::string(d), std::string(kComrLabels[k++])});
  return rules;
}

AggregatedOutput::AggregatedOutput(const FuzzyVariable& variable, std::vector<double> clip_levels)
    : variable_(&variable), clip_levels_(std::move(clip_levels)) {
  if (clip_levels_.size() != variable.terms().size())
    throw std::invalid_argument("aggregated output needs one clip level per output term");
  for (double c : clip_levels_)
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("clip level outside [0, 1]");
}

double AggregatedOutput::membership(double x) const {
  double mu = 0.0;
  const auto& terms = variable_->terms();
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (clip_levels_[i] > 0.0) mu = std::max(mu, std::min(clip_levels_[i], terms[i].mf(x)));
  return mu;
}

namespace {

double grade_of(std::span<const Grade> grades, const std::string& label) {
  for (const auto& g : grades)
    if (g.label == label) return g.value;
  throw std::invalid_argument("missing grade for label '" + label + "'");
}

}  // namespace

AggregatedOutput infer(const RuleBase& rules, const FuzzyVariable& comr,
                       std::span<const Grade> energy_grades,
                       std::span<const Grade> distance_grades) {
  std::vector<double> clip(comr.terms().size(), 0.0);
  for (const auto& r : rules.rules()) {
    const double activation =
        std::min(grade_of(energy_grades, r.energy), grade_of(distance_grades, r.distance));
    auto& level = clip[comr.index_of(r.comr)];
    level = std::max(level, activation);
  }
  return AggregatedOutput(comr, std::move(clip));
}

double defuzzify_coa(const AggregatedOutput& agg) {
  const auto& var = agg.variable();
  const auto& terms = var.terms();
  const auto& clip = agg.clip_levels();
  const double lo = var.lo();
  const double hi = var.hi();

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < clip.size(); ++i)
    if (clip[i] > 0.0) active.push_back(i);
  if (active.empty()) throw std::domain_error("no rule fired");

  // Knots of every clipped term: its own breakpoints plus where it meets its
  // clip level. Between consecutive knots each clipped term is linear.
  std::vector<double> knots{lo, hi};
  auto add = [&](double x) {
    if (x > lo && x < hi) knots.push_back(x);
  };
  for (auto i : active) {
    for (double b : terms[i].mf.breakpoints()) add(b);
    if (clip[i] < 1.0)
      for (double b : terms[i].mf.level_crossings(clip[i])) add(b);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto clipped = [&](std::size_t i, double x) { return std::min(clip[i], terms[i].mf(x)); };

  // The max of linear pieces kinks where two of them cross; add those too.
  std::vector<double> points;
  std::vector<double> cuts;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    points.push_back(a);
    cuts.clear();
    for (std::size_t p = 0; p < active.size(); ++p)
      for (std::size_t q = p + 1; q < active.size(); ++q) {
        const double da = clipped(active[p], a) - clipped(active[q], a);
        const double db = clipped(active[p], b) - clipped(active[q], b);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
          const double x = a + (b - a) * da / (da - db);
          if (x > a && x < b) cuts.push_back(x);
        }
      }
    std::sort(cuts.begin(), cuts.end());
    points.insert(points.end(), cuts.begin(), cuts.end());
  }
  points.push_back(hi);

  // Exact moments of a linear segment.
  double area = 0.0;
  double moment = 0.0;
  double x0 = points.front();
  double m0 = agg.membership(x0);
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double x1 = points[k];
    const double m1 = agg.membership(x1);
    const double h = x1 - x0;
    area += 0.5 * h * (m0 + m1);
    moment += h * (x0 * (2.0 * m0 + m1) + x1 * (m0 + 2.0 * m1)) / 6.0;
    x0 = x1;
    m0 = m1;
  }
  if (!(area > 0.0)) throw std::domain_error("no rule fired");
  return std::clamp(moment / area, lo, hi);
}

FuzzyVariable default_input_variable(std::string name, double universe_max,
                                     std::array<std::string_view, 3> labels) {
  const double u = universe_max;
  return FuzzyVariable(
      std::move(name), 0.0, u,
      {
          {std::string(labels[0]), MembershipFunction::left_shoulder(0.2 * u, 0.4 * u)},
          {std::string(labels[1]), MembershipFunction::triangular(0.2 * u, 0.5 * u, 0.8 * u)},
          {std::string(labels[2]), MembershipFunction::right_shoulder(0.6 * u, 0.8 * u)},
      });
}

FuzzyVariable default_comr_variable(double comr_max) {
  const double step = comr_max / 8.0;
  std::vector<Term> terms;
  terms.push_back({std::string(kComrLabels[0]), MembershipFunction::left_shoulder(0.0, step)});
  for (int i = 1; i <= 7; ++i)
    terms.push_back({std::string(kComrLabels[i]),
                     MembershipFunction::triangular((i - 1) * step, i * step, (i + 1) * step)});
  terms.push_back({std::string(kComrLabels[8]),
                   MembershipFunction::right_shoulder(7.0 * step, comr_max)});
  return FuzzyVariable("comr", 0.0, comr_max, std::move(terms));
}

FuzzyConfig FuzzyConfig::defaults(double initial_energy, double max_distance, double comr_max) {
  auto energy = default_input_variable("energy", initial_energy, kEnergyLabels);
  auto distance = default_input_variable("distance", max_distance, kDistanceLabels);
  auto comr = default_comr_variable(comr_max);
  RuleBase rules(RuleBase::standard_rules(), energy, distance, comr);
  return FuzzyConfig{std::move(energy), std::move(distance), std::move(comr), std::move(rules)};
}

double compute_comr(double residual_energy_j, double distance_to_bs_m, const FuzzyConfig& cfg) {
  const auto e = cfg.energy.fuzzify(residual_energy_j);
  const auto d = cfg.distance.fuzzify(distance_to_bs_m);
  return defuzzify_coa(infer(cfg.rules, cfg.comr, e, d));
}

}  // namespace fihr::fuzzy
