#pragma once

// Batch verification suites behind the CLI and the acceptance tests. Each
// suite is deterministic in its config and returns one merged AxiomReport
// with the config echoed into it.

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qinfer/classical.hpp"
#include "qinfer/oracle.hpp"
#include "qinfer/quantum.hpp"
#include "qinfer/report.hpp"

namespace qinfer {

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<int> dims{3, 4, 5};
  std::uint64_t trials = 1000;
  int max_dim = kDefaultMaxDim;
  ToleranceProfile tolerances{};

  // Throws InputError unless dims lie in [2, max_dim] and trials >= 1.
  void validate() const;
  nlohmann::json to_json() const;
};

struct ClassicalSuiteConfig {
  std::uint64_t seed = 0;
  int tables = 100;
  int n_min = 2;
  int n_max = 8;
  double tolerance = 1e-12;
  std::uint64_t triples_per_table = 2000;
};

// Kolmogorov, Rényi, Cox product rule, negation (m = 1 on tables, involution
// for m in {0.5, 1, 2, 5}), associativity of F for w = x and w = x^2, and the
// sum rule, over seed-fixed random tables.
AxiomReport classical_suite(const ClassicalSuiteConfig& config);

// Quantum Rényi axioms over random_renyi_instances, with a fresh random
// state every `batch` instances.
AxiomReport quantum_renyi_suite(int dim, int count, std::uint64_t seed, int batch = 50,
                                const QuantumRenyiTolerances& checks = {});

// Δ on random triples from a common eigenbasis (all commuting), skipping
// draws whose conditioning traces fall below `min_trace`, until `count`
// triples have been evaluated.
AxiomReport commuting_product_rule_suite(int dim, int count, std::uint64_t seed, double tolerance = 1e-12,
                                         double min_trace = 1e-6);

// verify-quantum: Rényi, frame additivity and commuting product rule for
// every dimension in the config.
AxiomReport quantum_suite(const RunConfig& config);

struct DeltaCurveRow {
  double r = 0.0;
  Convention convention = Convention::BThenA;
  std::optional<ViolationRecord> record;  // empty when a factor is null
  std::string status;                     // "ok" or the null factor
  std::optional<DeltaEstimate> oracle;
};

struct DeltaCurve {
  std::vector<DeltaCurveRow> rows;
  AxiomReport report;          // Δ(1)=0, affine fit, monotone |Δ|, oracle agreement
  nlohmann::json comparison;   // computed Δ(0) against the closed form
};

struct DeltaCurveConfig {
  int r_steps = 101;
  std::vector<Convention> conventions{Convention::BThenA};
  std::uint64_t oracle_trials = 0;  // 0 disables the Monte Carlo column
  std::uint64_t seed = 0;
  double endpoint_tol = 1e-12;
  double affine_tol = 1e-10;
};

DeltaCurve delta_curve(const DeltaCurveConfig& config);

std::string delta_curve_csv(const DeltaCurve& curve, bool with_oracle);

// Max residual of a least-squares line through (x, y).
double affine_fit_residual(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qinfer
