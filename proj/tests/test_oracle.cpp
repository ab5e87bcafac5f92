#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qinfer/lattice.hpp"
#include "qinfer/oracle.hpp"

using namespace qinfer;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

Projector P(const oracle::Mat& m) { return Projector(oracle::to_eigen(m)); }
DensityMatrix Rho(const oracle::Mat& m) { return DensityMatrix(oracle::to_eigen(m)); }

bool within(double estimate, double exact, double sigma, double k = 5.0) {
  return z_score(estimate, exact, sigma) <= k;
}

}  // namespace

TEST(SampleProposition, DiagonalRayBornValue) {
  const MeasurementRun run = sample_proposition(Rho(oracle::outer({kS, kS})), P(oracle::diag({1, 0})), 1000000, 1);
  EXPECT_EQ(run.accepted, run.trials);
  EXPECT_TRUE(within(run.estimate, 0.5, run.stderr_)) << run.estimate << " ± " << run.stderr_;
}

TEST(SampleProposition, IdentityIsCertain) {
  const MeasurementRun run = sample_proposition(random_state(3, 0.4, 2), Projector::identity(3), 10000, 3);
  EXPECT_EQ(run.hits, run.trials);
  EXPECT_EQ(run.estimate, 1.0);
}

TEST(SampleProposition, DiagonalState) {
  const MeasurementRun run =
      sample_proposition(Rho(oracle::diag({0.5, 0.3, 0.2})), P(oracle::diag({1, 1, 0})), 1000000, 4);
  EXPECT_TRUE(within(run.estimate, 0.8, run.stderr_)) << run.estimate;
}

TEST(SampleProposition, ExcursionsAcrossSeeds) {
  const DensityMatrix rho = random_state(3, 0.3, 5);
  const Projector p = random_projector(3, 1, 6);
  const double exact = born(rho, p);
  int excursions = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MeasurementRun run = sample_proposition(rho, p, 20000, seed);
    if (!within(run.estimate, exact, run.stderr_)) ++excursions;
  }
  EXPECT_EQ(excursions, 0);
}

TEST(SampleSequential, CollapseThenMeasure) {
  const MeasurementRun run =
      sample_sequential(Rho(oracle::diag({1, 0})), P(oracle::outer({kS, kS})), P(oracle::diag({1, 0})), 1000000, 7);
  EXPECT_TRUE(within(run.estimate, 0.5, run.stderr_));
  EXPECT_TRUE(within(run.acceptance(), 0.5, run.acceptance_stderr()));
}

TEST(SampleSequential, IdentityConditionReducesToProposition) {
  const DensityMatrix rho = random_state(4, 0.2, 8);
  const Projector p = random_projector(4, 2, 9);
  const MeasurementRun a = sample_sequential(rho, Projector::identity(4), p, 50000, 10);
  const MeasurementRun b = sample_proposition(rho, p, 50000, 10);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.accepted, 50000U);
}

TEST(SampleSequential, TwoQubitJointProposition) {
  const TwoQubitFamily f = two_qubit_family(0.0);
  const Projector pq = meet(f.p, f.q);
  const MeasurementRun run = sample_sequential(f.rho, f.r, pq, 1000000, 11);
  EXPECT_TRUE(within(run.estimate, lueders(f.rho, pq, f.r).value, run.stderr_));
}

TEST(SampleSequential, StarvationRaises) {
  EXPECT_THROW(sample_sequential(Rho(oracle::diag({1, 0})), P(oracle::diag({0, 1})), P(oracle::diag({0, 1})), 1000, 1),
               OracleStarvation);
  EXPECT_THROW(sample_proposition(Rho(oracle::diag({1, 0})), P(oracle::diag({0, 1})), 0, 1), InputError);
}

TEST(SampleSequential, ConcordanceWithTraceFormulas) {
  int agree = 0, acc_agree = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const int d = 2 + static_cast<int>(i % 4);
    const DensityMatrix rho = random_state(d, 0.3, derive_seed(123, i, 0));
    const Projector p = random_projector(d, 1, derive_seed(123, i, 1));
    const Projector q = random_projector(d, 1 + static_cast<int>(i % static_cast<std::uint64_t>(d)),
                                        derive_seed(123, i, 2));
    const MeasurementRun run = sample_sequential(rho, q, p, 200000, derive_seed(123, i, 3));
    agree += within(run.estimate, lueders(rho, p, q).value, run.stderr_);
    acc_agree += within(run.acceptance(), born(rho, q), run.acceptance_stderr());
  }
  EXPECT_GE(agree, 19);
  EXPECT_GE(acc_agree, 19);
}

TEST(SampleSequential, BitReproducible) {
  const DensityMatrix rho = random_state(3, 0.5, 1);
  const Projector p = random_projector(3, 1, 2);
  const Projector q = random_projector(3, 2, 3);
  const MeasurementRun a = sample_sequential(rho, q, p, 100000, 77);
  const MeasurementRun b = sample_sequential(rho, q, p, 100000, 77);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  const MeasurementRun c = sample_sequential(rho, q, p, 100000, 78);
  EXPECT_NE(a.hits, c.hits);
}

TEST(MeasurementRun, JsonAndInvariants) {
  const MeasurementRun run = sample_proposition(random_state(3, 0.5, 1), random_projector(3, 1, 2), 5000, 3);
  const auto j = run.to_json();
  for (const char* k : {"seed", "N", "accepted", "hits", "estimate", "stderr"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_LE(run.hits, run.accepted);
  EXPECT_LE(run.accepted, run.trials);
  EXPECT_NEAR(run.stderr_, std::sqrt(run.estimate * (1 - run.estimate) / static_cast<double>(run.accepted)), 1e-15);
}

TEST(ZScore, RoundingFloorAndDegenerateSigma) {
  EXPECT_EQ(z_score(1.0, 1.0 - 1e-16, 0.0), 0.0);
  EXPECT_EQ(z_score(0.5, 0.5, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score(1.0, 0.9, 0.0)));
  EXPECT_NEAR(z_score(0.53, 0.5, 0.01), 3.0, 1e-6);
  EXPECT_NEAR(z_score(0.47, 0.5, 0.01, 0.0), 3.0, 1e-12);
  EXPECT_TRUE(std::isnan(z_score(std::nan(""), 0.5, 0.01)));
}

TEST(DeltaOracle, CommutingTripleIsZero) {
  const Projector p = P(oracle::diag({1, 1, 0, 0}));
  const Projector q = P(oracle::diag({1, 0, 1, 0}));
  const Projector r = P(oracle::diag({1, 1, 1, 0}));
  const DensityMatrix rho = random_state(4, 0.6, 4);
  const DeltaEstimate est = delta_oracle(rho, p, q, r, Convention::BThenA, 1000000, 5);
  EXPECT_TRUE(within(est.delta, 0.0, est.stderr_)) << est.delta << " ± " << est.stderr_;
}

TEST(DeltaOracle, TwoQubitEndpoints) {
  for (double r : {0.0, 1.0}) {
    const TwoQubitFamily f = two_qubit_family(r);
    const double exact = product_rule_residual(f.rho, f.p, f.q, f.r, Convention::BThenA).delta;
    const DeltaEstimate est = delta_oracle(f.rho, f.p, f.q, f.r, Convention::BThenA, 1000000, 6);
    EXPECT_TRUE(within(est.delta, exact, est.stderr_)) << "r=" << r << " " << est.delta << " ± " << est.stderr_;
    EXPECT_GT(est.stderr_, 0.0);
    EXPECT_EQ(est.joint.seed, derive_seed(6, 0xd1));
    EXPECT_NE(est.first.seed, est.second.seed);
  }
}

TEST(DeltaOracle, AThenBStarvesOnTwoQubitFamily) {
  const TwoQubitFamily f = two_qubit_family(0.0);
  EXPECT_THROW(delta_oracle(f.rho, f.p, f.q, f.r, Convention::AThenB, 1000, 1), OracleStarvation);
}
