#pragma once

// Monte Carlo measurement simulator: a frequency-based estimate of Born and
// Lüders probabilities that shares no code path with the trace formulas.
//
// Each trial draws an eigenvector of ρ with probability equal to its
// eigenvalue, measures the condition (accepting with probability |Q ψ|^2 and
// collapsing to Qψ/|Qψ|), then measures the target on the collapsed state.
// Trial i draws its randomness from (seed, i) alone, so runs are
// bit-reproducible for any number of workers.

#include <cstdint>

#include <nlohmann/json.hpp>

#include "qinfer/linalg.hpp"
#include "qinfer/quantum.hpp"

namespace qinfer {

struct MeasurementRun {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;  // hits / accepted
  double stderr_ = 0.0;   // sqrt(p(1-p)/accepted)

  double acceptance() const { return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0; }
  // Binomial standard error of the acceptance fraction.
  double acceptance_stderr() const;

  nlohmann::json to_json() const;
};

MeasurementRun sample_proposition(const DensityMatrix& rho, const Projector& p, std::uint64_t trials,
                                  std::uint64_t seed);

// Throws OracleStarvation if no trial passes the condition.
MeasurementRun sample_sequential(const DensityMatrix& rho, const Projector& condition, const Projector& target,
                                 std::uint64_t trials, std::uint64_t seed);

// Distance of an estimate from an exact value in units of σ, after an
// absolute allowance for rounding in the exact value. Zero inside the
// allowance, +inf for a nonzero excess at σ = 0. Agreement at k sigma is
// z_score(...) <= k.
double z_score(double estimate, double exact, double sigma,
               double rounding_floor = default_tolerances().probability_tol);

struct DeltaEstimate {
  double delta = 0.0;
  double stderr_ = 0.0;  // first-order propagation over the three runs
  MeasurementRun joint;
  MeasurementRun first;
  MeasurementRun second;

  nlohmann::json to_json() const;
};

// Δ from three independent sequential runs with derived seeds; meets are
// formed by the lattice module, conditionals by sampling only.
DeltaEstimate delta_oracle(const DensityMatrix& rho, const Projector& p, const Projector& q, const Projector& r,
                           Convention convention, std::uint64_t trials, std::uint64_t seed,
                           const ToleranceProfile& tol = default_tolerances());

}  // namespace qinfer
