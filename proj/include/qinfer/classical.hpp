#pragma once

// Finite classical probability: Kolmogorov and Rényi axiom checks, the ratio
// conditional, and residual checkers for the Cox calculus (product form,
// associativity of F, negation involution, sum rule).
//
// Events are bitmasks over the n elementary propositions, n <= 20.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qinfer/report.hpp"

namespace qinfer {

using Event = std::uint32_t;

inline constexpr int kMaxElementary = 20;

class FiniteEventSpace {
 public:
  explicit FiniteEventSpace(int n);

  int size() const { return n_; }
  Event omega() const { return static_cast<Event>((std::uint64_t{1} << n_) - 1); }
  Event complement(Event a) const { return omega() & ~a; }
  std::uint64_t event_count() const { return std::uint64_t{1} << n_; }
  bool contains(Event a) const { return (a & ~omega()) == 0; }

 private:
  int n_;
};

class ProbabilityTable {
 public:
  // Weights must be non-negative and sum to 1 within 1e-12.
  ProbabilityTable(std::vector<double> weights, std::vector<std::string> labels = {});

  static ProbabilityTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const FiniteEventSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Pr(A) as a direct sum over the elementary propositions in A.
  double prob(Event a) const;

 private:
  FiniteEventSpace space_;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

// Relative frequencies N_k / N of repeated trials.
struct FrequencyTable {
  std::uint64_t trials = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counts;

  void validate() const;
  ProbabilityTable to_probability_table() const;
};

// Pr(A|B) = Pr(A∩B)/Pr(B). Throws ConditioningOnNull when Pr(B) = 0.
double conditional_ratio(const ProbabilityTable& table, Event a, Event b);

// Regraduation w as a strictly increasing piecewise-linear interpolant on
// [domain_lo, domain_hi] into [0, 1], plus the negation exponent m.
class PlausibilityCalculus {
 public:
  PlausibilityCalculus(std::vector<double> knots, std::vector<double> values, double m = 1.0);

  static PlausibilityCalculus from_function(const std::function<double(double)>& w, double lo, double hi,
                                            int knot_count = 4097, double m = 1.0);
  static PlausibilityCalculus identity(double m = 1.0);
  // w(x) = x^p on [0, 1].
  static PlausibilityCalculus power(double p, double m = 1.0);

  double w(double x) const;
  double w_inverse(double y) const;
  // F(x, y) = w^-1(w(x) w(y)).
  double product(double x, double y) const;
  // S(x) = (1 - x^m)^(1/m).
  double negation(double x) const;

  double m() const { return m_; }
  std::pair<double, double> domain() const { return {knots_.front(), knots_.back()}; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double m_;
};

// |F(F(x,y),z) - F(x,F(y,z))|.
double associativity_residual(const PlausibilityCalculus& calculus, double x, double y, double z);
double associativity_residual(const std::function<double(double, double)>& f, double x, double y, double z);

// Max associativity residual of `f` over a uniform grid of `points` per axis
// on [eps, 1 - eps].
double max_associativity_residual(const std::function<double(double, double)>& f, int points = 64,
                                  double eps = 1e-6);

// |S(S(x)) - x| for S(x) = (1 - x^m)^(1/m).
double negation_involution_residual(double m, double x);

// |w(A|B) + w(¬A|B) - 1| with w given by ratio conditionals.
double negation_sum_residual(const ProbabilityTable& table, Event a, Event b);

// |w(A∧B|C) - w(B|C) w(A|B∧C)|, with raw plausibilities w^-1(Pr(.|.)) taken
// through the calculus and back.
double cox_product_residual(const PlausibilityCalculus& calculus, const ProbabilityTable& table, Event a, Event b,
                            Event c);

// Each line of the sum-rule derivation evaluated with ratio conditionals.
struct SumRuleTrace {
  double lhs = 0.0;                // w(A∨B|C)
  std::array<double, 9> steps{};   // the nine lines of the derivation
  double residual = 0.0;           // |lhs - steps[8]|
  double max_step_deviation = 0.0; // max_k |steps[k] - lhs|
};

// Throws ConditioningOnNull naming the step if Pr(C), Pr(¬A∧C) or Pr(B∧C)
// is zero.
SumRuleTrace sum_rule_trace(const ProbabilityTable& table, Event a, Event b, Event c);
double sum_rule_residual(const ProbabilityTable& table, Event a, Event b, Event c);

// Non-negativity, normalization and finite additivity. Exhaustive over all
// disjoint pairs for n <= 12, `sample_budget` random pairs beyond.
AxiomReport kolmogorov_check(const ProbabilityTable& table, double tol, std::uint64_t sample_budget = 100000,
                             std::uint64_t seed = 0);

using ConditionalFn = std::function<double(Event, Event)>;

struct RenyiDomain {
  FiniteEventSpace space;
  std::vector<Event> conditioning;  // G, nonempty
  int exhaustive_limit = 6;         // enumerate all tuples when n <= this
  std::uint64_t sample_budget = 20000;
  std::uint64_t seed = 0;
};

// Pr(B|B) = 1, additivity in the first argument, and the chain law
// Pr(A|B) = Pr(A∩B|C)/Pr(B|C) for B ⊂ C with Pr(B|C) > 0.
AxiomReport renyi_check(const ConditionalFn& conditional, const RenyiDomain& domain, double tol);

// The ratio conditional of `table` over G = {B : Pr(B) > 0}.
AxiomReport renyi_check(const ProbabilityTable& table, double tol, int exhaustive_limit = 6,
                        std::uint64_t sample_budget = 20000, std::uint64_t seed = 0);

}  // namespace qinfer
