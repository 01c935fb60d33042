#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fihr::fuzzy {

// 0 below left, rises to 1 at peak, falls to 0 at right.
struct Triangular {
  double left;
  double peak;
  double right;
};

// Saturated (1) below full_until, falls linearly to 0 at zero_from.
// This is the shape the literature sometimes calls "rightmost trapezoidal".
struct LeftShoulder {
  double full_until;
  double zero_from;
};

// 0 below zero_until, rises linearly to 1 at full_from and stays there.
struct RightShoulder {
  double zero_until;
  double full_from;
};

/// Piecewise-linear membership function. Breakpoint ordering is checked on
/// construction; evaluation is total and always returns a grade in [0, 1].
class MembershipFunction {
 public:
  using Shape = std::variant<Triangular, LeftShoulder, RightShoulder>;

  static MembershipFunction triangular(double left, double peak, double right);
  static MembershipFunction left_shoulder(double full_until, double zero_from);
  static MembershipFunction right_shoulder(double zero_until, double full_from);

  double operator()(double m) const;

  // Abscissae where the slope changes.
  std::vector<double> breakpoints() const;

  // Points where the function crosses `level` (0 < level <= 1).
  std::vector<double> level_crossings(double level) const;

  const Shape& shape() const { return shape_; }

 private:
  explicit MembershipFunction(Shape shape) : shape_(shape) {}
  Shape shape_;
};

double eval_membership(const MembershipFunction& mf, double m);

struct Term {
  std::string label;
  MembershipFunction mf;
};

struct Grade {
  std::string label;
  double value;
};

class FuzzyVariable {
 public:
  // Throws std::invalid_argument on an empty or inverted universe, duplicate
  // labels, or a point of the universe that no term covers.
  FuzzyVariable(std::string name, double lo, double hi, std::vector<Term> terms);

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Term>& terms() const { return terms_; }

  double clamp(double crisp) const;

  // Index of `label`, or throws std::out_of_range.
  std::size_t index_of(std::string_view label) const;

  // One grade per term in term order; input is clamped into the universe.
  std::vector<Grade> fuzzify(double crisp) const;

  // Copy with one term's membership function replaced (revalidated).
  FuzzyVariable with_term(std::string_view label, MembershipFunction mf) const;

 private:
  std::string name_;
  double lo_;
  double hi_;
  std::vector<Term> terms_;
};

std::vector<Grade> fuzzify(const FuzzyVariable& v, double crisp);

struct Rule {
  std::string energy;
  std::string distance;
  std::string comr;
};

/// The 3x3 (energy, distance) -> ComR rule table. Construction checks that
/// the antecedents cover every pair exactly once and that each output term
/// is used exactly once.
class RuleBase {
 public:
  RuleBase(std::vector<Rule> rules, const FuzzyVariable& energy, const FuzzyVariable& distance,
           const FuzzyVariable& comr);

  // Low/Med/High x Close/Med/Far, ordered from VerySmall to VeryLarge.
  static std::vector<Rule> standard_rules();

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

class AggregatedOutput {
 public:
  AggregatedOutput(const FuzzyVariable& variable, std::vector<double> clip_levels);

  const FuzzyVariable& variable() const { return *variable_; }
  const std::vector<double>& clip_levels() const { return clip_levels_; }

  double clip(std::string_view label) const { return clip_levels_[variable_->index_of(label)]; }

  // max over terms of min(clip, grade)
  double membership(double x) const;

 private:
  const FuzzyVariable* variable_;
  std::vector<double> clip_levels_;
};

// Mamdani: min for conjunction and implication, max for aggregation.
AggregatedOutput infer(const RuleBase& rules, const FuzzyVariable& comr,
                       std::span<const Grade> energy_grades,
                       std::span<const Grade> distance_grades);

// Center of area of the aggregated set. The aggregate is piecewise linear,
// so the centroid is integrated exactly between its kinks.
// Throws std::domain_error("no rule fired") when every clip level is zero.
double defuzzify_coa(const AggregatedOutput& agg);

struct FuzzyConfig {
  FuzzyVariable energy;
  FuzzyVariable distance;
  FuzzyVariable comr;
  RuleBase rules;

  // Default partitions: shoulders at 0.2/0.4 and 0.6/0.8 of the input
  // universes with a Med triangle at 0.2/0.5/0.8; nine evenly spaced output
  // terms over [0, comr_max].
  static FuzzyConfig defaults(double initial_energy, double max_distance, double comr_max);
};

inline constexpr std::array<std::string_view, 3> kEnergyLabels{"Low", "Med", "High"};
inline constexpr std::array<std::string_view, 3> kDistanceLabels{"Close", "Med", "Far"};
inline constexpr std::array<std::string_view, 9> kComrLabels{
    "VerySmall", "Small", "RatherSmall", "MedSmall", "Med",
    "MedLarge", "RatherLarge", "Large", "VeryLarge"};

FuzzyVariable default_input_variable(std::string name, double universe_max,
                                     std::array<std::string_view, 3> labels);
FuzzyVariable default_comr_variable(double comr_max);

double compute_comr(double residual_energy_j, double distance_to_bs_m, const FuzzyConfig& cfg);

}  // namespace fihr::fuzzy
