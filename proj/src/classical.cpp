#include "qinfer/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "qinfer/errors.hpp"

namespace qinfer {

FiniteEventSpace::FiniteEventSpace(int n) : n_(n) {
  if (n < 1 || n > kMaxElementary) {
    throw InputError(fmt::format("event space size {} outside [1, {}]", n, kMaxElementary));
  }
}

ProbabilityTable::ProbabilityTable(std::vector<double> weights, std::vector<std::string> labels)
    : space_(static_cast<int>(weights.size())), weights_(std::move(weights)), labels_(std::move(labels)) {
  if (labels_.empty()) {
    for (std::size_t i = 0; i < weights_.size(); ++i) labels_.push_back(fmt::format("omega{}", i + 1));
  }
  if (labels_.size() != weights_.size()) throw InputError("labels and weights differ in length");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw InputError(fmt::format("weight {} is not a non-negative number", w));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError(fmt::format("weights sum to {}, not 1", total));
  }
}

ProbabilityTable ProbabilityTable::from_json(const nlohmann::json& j) {
  return ProbabilityTable(j.at("weights").get<std::vector<double>>(),
                          j.value("labels", std::vector<std::string>{}));
}

nlohmann::json ProbabilityTable::to_json() const {
  return {{"labels", labels_}, {"weights", weights_}};
}

double ProbabilityTable::prob(Event a) const {
  if (!space_.contains(a)) throw InputError("event outside the event space");
  double p = 0.0;
  for (int i = 0; i < space_.size(); ++i) {
    if (a >> i & 1U) p += weights_[static_cast<std::size_t>(i)];
  }
  return p;
}

void FrequencyTable::validate() const {
  if (trials == 0) throw InputError("frequency table needs at least one trial");
  std::uint64_t total = 0;
  for (const auto& [label, n] : counts) total += n;
  if (total != trials) throw InputError(fmt::format("counts sum to {}, expected {}", total, trials));
}

ProbabilityTable FrequencyTable::to_probability_table() const {
  validate();
  std::vector<double> w;
  std::vector<std::string> labels;
  for (const auto& [label, n] : counts) {
    w.push_back(static_cast<double>(n) / static_cast<double>(trials));
    labels.push_back(label);
  }
  return ProbabilityTable(std::move(w), std::move(labels));
}

namespace {

double ratio_or_throw(const ProbabilityTable& t, Event a, Event b, const std::string& factor) {
  const double pb = t.prob(b);
  if (pb <= 0.0) throw ConditioningOnNull(factor, pb);
  return t.prob(a & b) / pb;
}

}  // namespace

double conditional_ratio(const ProbabilityTable& table, Event a, Event b) {
  return ratio_or_throw(table, a, b, "B");
}

PlausibilityCalculus::PlausibilityCalculus(std::vector<double> knots, std::vector<double> values, double m)
    : knots_(std::move(knots)), values_(std::move(values)), m_(m) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw InputError("regraduation needs at least two knots with matching values");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw InputError("regraduation knots must be strictly increasing");
    if (!(values_[i] > values_[i - 1])) throw InputError("regraduation w must be strictly increasing");
  }
  if (values_.front() < 0.0 || values_.back() > 1.0) throw InputError("regraduation w must map into [0, 1]");
  if (!(m_ > 0.0) || !std::isfinite(m_)) throw InputError("negation exponent m must be positive and finite");
}

PlausibilityCalculus PlausibilityCalculus::from_function(const std::function<double(double)>& w, double lo, double hi,
                                                         int knot_count, double m) {
  if (knot_count < 2 || !(hi > lo)) throw InputError("invalid regraduation grid");
  std::vector<double> knots(static_cast<std::size_t>(knot_count));
  std::vector<double> values(knots.size());
  for (int i = 0; i < knot_count; ++i) {
    const double x = (i == knot_count - 1) ? hi : lo + (hi - lo) * i / (knot_count - 1);
    knots[static_cast<std::size_t>(i)] = x;
    values[static_cast<std::size_t>(i)] = w(x);
  }
  return PlausibilityCalculus(std::move(knots), std::move(values), m);
}

PlausibilityCalculus PlausibilityCalculus::identity(double m) {
  return PlausibilityCalculus({0.0, 1.0}, {0.0, 1.0}, m);
}

PlausibilityCalculus PlausibilityCalculus::power(double p, double m) {
  if (!(p > 0.0)) throw InputError("power regraduation needs p > 0");
  return from_function([p](double x) { return std::pow(x, p); }, 0.0, 1.0, 4097, m);
}

double PlausibilityCalculus::w(double x) const {
  if (x < knots_.front() || x > knots_.back()) {
    throw InputError(fmt::format("plausibility {} outside regraduation domain [{}, {}]", x, knots_.front(), knots_.back()));
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  const double t = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double PlausibilityCalculus::w_inverse(double y) const {
  if (y < values_.front() || y > values_.back()) {
    throw InputError(fmt::format("value {} outside the range of w", y));
  }
  auto it = std::upper_bound(values_.begin(), values_.end(), y);
  if (it == values_.end()) return knots_.back();
  const auto i = static_cast<std::size_t>(it - values_.begin());
  const double t = (y - values_[i - 1]) / (values_[i] - values_[i - 1]);
  return knots_[i - 1] + t * (knots_[i] - knots_[i - 1]);
}

double PlausibilityCalculus::product(double x, double y) const {
  return w_inverse(w(x) * w(y));
}

double PlausibilityCalculus::negation(double x) const {
  return std::pow(1.0 - std::pow(x, m_), 1.0 / m_);
}

double associativity_residual(const std::function<double(double, double)>& f, double x, double y, double z) {
  return std::abs(f(f(x, y), z) - f(x, f(y, z)));
}

double associativity_residual(const PlausibilityCalculus& calculus, double x, double y, double z) {
  return associativity_residual([&](double a, double b) { return calculus.product(a, b); }, x, y, z);
}

double max_associativity_residual(const std::function<double(double, double)>& f, int points, double eps) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = eps + (1.0 - 2.0 * eps) * i / (points - 1);
  double worst = 0.0;
  for (double x : grid) {
    for (double y : grid) {
      for (double z : grid) worst = std::max(worst, associativity_residual(f, x, y, z));
    }
  }
  return worst;
}

double negation_involution_residual(double m, double x) {
  if (!(m > 0.0) || !std::isfinite(m)) throw InputError("negation exponent m must be positive and finite");
  if (x < 0.0 || x > 1.0) throw InputError(fmt::format("negation argument {} outside [0, 1]", x));
  // Near x = 0 with m > 1 (or x = 1 with m < 1) x^m drops below double
  // epsilon and S rounds to a constant, so S is evaluated with 50 digits.
  using Wide = boost::multiprecision::cpp_bin_float_50;
  const Wide wm(m);
  auto s = [&wm](const Wide& v) {
    const Wide t = 1 - boost::multiprecision::pow(v, wm);
    return t <= 0 ? Wide(0) : Wide(boost::multiprecision::pow(t, 1 / wm));
  };
  return static_cast<double>(boost::multiprecision::abs(s(s(Wide(x))) - Wide(x)));
}

double negation_sum_residual(const ProbabilityTable& table, Event a, Event b) {
  const Event not_a = table.space().complement(a);
  return std::abs(conditional_ratio(table, a, b) + conditional_ratio(table, not_a, b) - 1.0);
}

double cox_product_residual(const PlausibilityCalculus& calculus, const ProbabilityTable& table, Event a, Event b,
                            Event c) {
  const double joint = ratio_or_throw(table, a & b, c, "C");
  const double first = ratio_or_throw(table, b, c, "C");
  const double second = ratio_or_throw(table, a, b & c, "B∧C");
  const double raw_joint = calculus.w_inverse(joint);
  const double raw_first = calculus.w_inverse(first);
  const double raw_second = calculus.w_inverse(second);
  return std::abs(calculus.w(raw_joint) - calculus.w(raw_first) * calculus.w(raw_second));
}

SumRuleTrace sum_rule_trace(const ProbabilityTable& table, Event a, Event b, Event c) {
  const auto& sp = table.space();
  const Event not_a = sp.complement(a);
  const Event not_b = sp.complement(b);
  auto w = [&](Event x, Event given, const char* step) { return ratio_or_throw(table, x, given, step); };

  SumRuleTrace t;
  t.lhs = w(a | b, c, "lhs: C");
  t.steps[0] = 1.0 - w(sp.complement(a | b), c, "step 1: C");
  t.steps[1] = 1.0 - w(not_a & not_b, c, "step 2: C");
  const double not_a_c = w(not_a, c, "step 3: C");
  const double b_given_not_a_c = w(b, not_a & c, "step 3: ¬A∧C");
  t.steps[2] = 1.0 - not_a_c * w(not_b, not_a & c, "step 3: ¬A∧C");
  t.steps[3] = 1.0 - not_a_c * (1.0 - b_given_not_a_c);
  t.steps[4] = w(a, c, "step 5: C") + not_a_c * b_given_not_a_c;
  t.steps[5] = w(a, c, "step 6: C") + w(not_a & b, c, "step 6: C");
  const double b_c = w(b, c, "step 7: C");
  const double a_given_b_c = w(a, b & c, "step 7: B∧C");
  t.steps[6] = w(a, c, "step 7: C") + b_c * w(not_a, b & c, "step 7: B∧C");
  t.steps[7] = w(a, c, "step 8: C") + b_c * (1.0 - a_given_b_c);
  t.steps[8] = w(a, c, "step 9: C") + b_c - w(a & b, c, "step 9: C");
  t.residual = std::abs(t.lhs - t.steps[8]);
  for (double s : t.steps) t.max_step_deviation = std::max(t.max_step_deviation, std::abs(s - t.lhs));
  return t;
}

double sum_rule_residual(const ProbabilityTable& table, Event a, Event b, Event c) {
  return sum_rule_trace(table, a, b, c).residual;
}

namespace {

constexpr const char* kNull = "Pr(A)≥0";
constexpr const char* kOmega = "Pr(Ω)=1";
constexpr const char* kAdditive = "Pr(A∪B)=Pr(A)+Pr(B) if A∩B=∅";

// Uniform random submask of `m`.
Event random_submask(Event m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> bits(0, 0xffffffffU);
  return m & bits(rng);
}

}  // namespace

AxiomReport kolmogorov_check(const ProbabilityTable& table, double tol, std::uint64_t sample_budget,
                             std::uint64_t seed) {
  AxiomReport report("kolmogorov");
  report.seed = seed;
  const auto& sp = table.space();
  const bool exhaustive = sp.size() <= 12;
  report.config = {{"n", sp.size()}, {"exhaustive", exhaustive}, {"tolerance", tol}};

  report.record("omega", kOmega, tol, std::abs(table.prob(sp.omega()) - 1.0));

  if (exhaustive) {
    for (Event a = 0; a <= sp.omega(); ++a) {
      report.record("null", kNull, tol, std::max(0.0, -table.prob(a)));
      const Event rest = sp.complement(a);
      // Enumerate every submask of the complement, including the empty set.
      for (Event b = rest;; b = (b - 1) & rest) {
        report.record("additivity", kAdditive, tol, std::abs(table.prob(a | b) - table.prob(a) - table.prob(b)));
        if (b == 0) break;
      }
      ++report.instances;
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < sample_budget; ++s) {
      const Event a = random_submask(sp.omega(), rng);
      const Event b = random_submask(sp.complement(a), rng);
      report.record("null", kNull, tol, std::max(0.0, -table.prob(a)));
      report.record("additivity", kAdditive, tol, std::abs(table.prob(a | b) - table.prob(a) - table.prob(b)));
    }
    report.instances = sample_budget;
  }
  return report;
}

namespace {

constexpr const char* kOne = "Pr(B|B)=1";
constexpr const char* kCAdd = "Pr(A∪B|C)=Pr(A|C)+Pr(B|C) if A∩B=∅";
constexpr const char* kAbc = "Pr(A|B)=Pr(A∩B|C)/Pr(B|C) for B⊂C, Pr(B|C)>0";
constexpr const char* kNonNeg = "Pr(A|B)≥0";

}  // namespace

AxiomReport renyi_check(const ConditionalFn& pr, const RenyiDomain& domain, double tol) {
  AxiomReport report("renyi");
  report.seed = domain.seed;
  const auto& sp = domain.space;
  if (domain.conditioning.empty()) throw InputError("Rényi check needs a nonempty conditioning set");
  std::vector<Event> g = domain.conditioning;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  auto in_g = [&](Event e) { return std::binary_search(g.begin(), g.end(), e); };
  const bool exhaustive = sp.size() <= domain.exhaustive_limit;
  report.config = {{"n", sp.size()}, {"conditioning_events", g.size()}, {"exhaustive", exhaustive},
                   {"tolerance", tol}};

  for (Event b : g) report.record("one", kOne, tol, std::abs(pr(b, b) - 1.0));

  auto abc = [&](Event a, Event b, Event c) {
    const double pbc = pr(b, c);
    if (!(pbc > 0.0)) {
      report.skip("abc", kAbc, tol);
      return;
    }
    report.record("abc", kAbc, tol, std::abs(pr(a, b) - pr(a & b, c) / pbc));
  };

  if (exhaustive) {
    for (Event c : g) {
      for (Event a = 0; a <= sp.omega(); ++a) {
        report.record("non_negative", kNonNeg, tol, std::max(0.0, -pr(a, c)));
        const Event rest = sp.complement(a);
        for (Event b = rest;; b = (b - 1) & rest) {
          report.record("c_additivity", kCAdd, tol, std::abs(pr(a | b, c) - pr(a, c) - pr(b, c)));
          if (b == 0) break;
        }
      }
      for (Event b = c;; b = (b - 1) & c) {
        if (in_g(b)) {
          for (Event a = 0; a <= sp.omega(); ++a) abc(a, b, c);
        }
        if (b == 0) break;
      }
    }
    report.instances = g.size();
  } else {
    std::mt19937_64 rng(domain.seed);
    std::uniform_int_distribution<std::size_t> pick_g(0, g.size() - 1);
    for (std::uint64_t s = 0; s < domain.sample_budget; ++s) {
      const Event c = g[pick_g(rng)];
      const Event a = random_submask(sp.omega(), rng);
      const Event b = random_submask(sp.complement(a), rng);
      report.record("non_negative", kNonNeg, tol, std::max(0.0, -pr(a, c)));
      report.record("c_additivity", kCAdd, tol, std::abs(pr(a | b, c) - pr(a, c) - pr(b, c)));
      const Event nested = random_submask(c, rng);
      if (in_g(nested)) {
        abc(a, nested, c);
      } else {
        report.skip("abc", kAbc, tol);
      }
    }
    report.instances = domain.sample_budget;
  }
  return report;
}

AxiomReport renyi_check(const ProbabilityTable& table, double tol, int exhaustive_limit, std::uint64_t sample_budget,
                        std::uint64_t seed) {
  const auto& sp = table.space();
  std::vector<Event> g;
  for (Event b = 1; b <= sp.omega(); ++b) {
    if (table.prob(b) > 0.0) g.push_back(b);
  }
  RenyiDomain domain{sp, std::move(g), exhaustive_limit, sample_budget, seed};
  auto report = renyi_check([&](Event a, Event b) { return conditional_ratio(table, a, b); }, domain, tol);
  report.config["conditional"] = "ratio";
  return report;
}

}  // namespace qinfer
