#pragma once

// Lüders conditional probability, the Born rule, the quantum Rényi axiom
// checker, the product-rule residual Δ and the two-qubit violation family.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qinfer/linalg.hpp"
#include "qinfer/report.hpp"

namespace qinfer {

struct ConditionalValue {
  double value = 0.0;
  double numerator = 0.0;    // tr(QρQP)
  double denominator = 0.0;  // tr(ρQ)
  std::string convention_note;
};

// Order in which the product rule chains the two propositions.
//   BThenA: Δ  = Pr(P∧Q|R) - Pr(P|R) Pr(Q|P∧R)
//   AThenB: Δ' = Pr(P∧Q|R) - Pr(Q|R) Pr(P|Q∧R)
enum class Convention { BThenA, AThenB };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

struct ViolationRecord {
  double r = 0.0;  // mixing parameter of the state
  double delta = 0.0;
  Convention convention = Convention::BThenA;
  // Pr(P∧Q|R), then the two chained factors in the order of the convention.
  std::array<double, 3> components{};
};

// QρQ / tr(ρQ). Throws ConditioningOnNull when tr(ρQ) <= probability_tol.
DensityMatrix conditioned_state(const DensityMatrix& rho, const Projector& q,
                                const ToleranceProfile& tol = default_tolerances());

// tr(QρQP) / tr(ρQ).
ConditionalValue lueders(const DensityMatrix& rho, const Projector& p, const Projector& q,
                         const ToleranceProfile& tol = default_tolerances());

// tr(ρP).
double born(const DensityMatrix& rho, const Projector& p);

struct QuantumRenyiInstance {
  Projector p;
  Projector q;
  Projector r;
};

struct QuantumRenyiTolerances {
  double one = 1e-12;
  double additivity = 1e-12;
  double chain = 1e-10;
};

// (qone) on every Q and R, orthogonal additivity when PQ = 0, and the chain
// law Pr(P∧Q|Q) = Pr(P∧Q|R)/Pr(Q|R) when Q <= R. Instances that do not meet
// a side condition are skipped for that check and counted.
AxiomReport quantum_renyi_check(const DensityMatrix& rho, const std::vector<QuantumRenyiInstance>& instances,
                                const QuantumRenyiTolerances& checks = {},
                                const ToleranceProfile& tol = default_tolerances());

// Randomized instances in dimension `dim`: `count` orthogonal-pair instances
// (P ⟂ Q, R random) and `count` nested-chain instances (Q < R from a shared
// eigenbasis, P overlapping Q).
std::vector<QuantumRenyiInstance> random_renyi_instances(int dim, int count, std::uint64_t seed);

// Δ for the chosen convention, every conditional by the Lüders form and every
// meet by range intersection. Throws ConditioningOnNull naming the factor.
ViolationRecord product_rule_residual(const DensityMatrix& rho, const Projector& p, const Projector& q,
                                      const Projector& r, Convention convention,
                                      const ToleranceProfile& tol = default_tolerances());

struct TwoQubitFamily {
  Projector p;  // |↑⟩⟨↑| ⊗ 1
  Projector q;  // 1 ⊗ |↑⟩⟨↑|
  Projector r;  // 1 ⊗ |→⟩⟨→|
  DensityMatrix rho;  // (r/4) 1⊗1 + (1 - r)|↑↑⟩⟨↑↑|
};

TwoQubitFamily two_qubit_family(double r);

// The closed form ((√2 - 1)/2)(r - 1) quoted for this family. Comparison
// target only; the library's Δ is computed, never taken from here.
double closed_form_delta(double r);

struct DeltaScanOptions {
  int dim = 2;
  std::uint64_t trials = 1000;
  std::pair<double, double> purity_mix_range{0.0, 0.0};
  std::uint64_t seed = 0;
  Convention convention = Convention::BThenA;
  // Draw all three projectors from one random eigenbasis instead of
  // independently; such triples commute and are not rejected.
  bool common_eigenbasis = false;
  int max_dim = kDefaultMaxDim;
};

struct DeltaScanResult {
  std::vector<ViolationRecord> records;  // sorted by |Δ| descending
  std::uint64_t rejected_commuting = 0;
  std::uint64_t rejected_null = 0;
};

// Random states and projector triples; deterministic in the seed and
// independent of the worker count.
DeltaScanResult delta_scan(const DeltaScanOptions& options);

// For `resolutions` random orthonormal bases, checks that the Born
// probabilities of the rank-1 frame projectors sum to 1 and that
// Pr(Pi ∨ Pj) = Pr(Pi) + Pr(Pj). Dimensions below 3 run with a warning.
AxiomReport frame_additivity_check(const DensityMatrix& rho, int resolutions, std::uint64_t seed,
                                   double check_tol = 1e-12, const ToleranceProfile& tol = default_tolerances());

// Same checks over caller-supplied resolutions of the identity.
AxiomReport frame_additivity_check(const DensityMatrix& rho, const std::vector<std::vector<Projector>>& resolutions,
                                   double check_tol = 1e-12, const ToleranceProfile& tol = default_tolerances());

// Writes records as CSV: r,delta,convention,pr_joint,pr_first,pr_second.
std::string violation_records_csv(const std::vector<ViolationRecord>& records);

}  // namespace qinfer
