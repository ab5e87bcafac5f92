#include "qinfer/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "qinfer/lattice.hpp"
#include "parallel.hpp"

namespace qinfer {

double MeasurementRun::acceptance_stderr() const {
  if (trials == 0) return 0.0;
  const double f = acceptance();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
}

double z_score(double estimate, double exact, double sigma, double rounding_floor) {
  const double diff = std::abs(estimate - exact);
  if (std::isnan(diff) || std::isnan(sigma)) return std::numeric_limits<double>::quiet_NaN();
  const double excess = std::max(0.0, diff - rounding_floor);
  if (excess == 0.0) return 0.0;
  return sigma > 0.0 ? excess / sigma : std::numeric_limits<double>::infinity();
}

nlohmann::json MeasurementRun::to_json() const {
  return {{"seed", seed},   {"N", trials},         {"accepted", accepted},
          {"hits", hits},   {"estimate", estimate}, {"stderr", stderr_}};
}

nlohmann::json DeltaEstimate::to_json() const {
  return {{"delta", delta},
          {"stderr", stderr_},
          {"joint", joint.to_json()},
          {"first", first.to_json()},
          {"second", second.to_json()}};
}

namespace {

// Per-trial stream: splitmix64 seeded from (seed, trial index).
class TrialStream {
 public:
  explicit TrialStream(std::uint64_t state) : state_(state) {}

  double uniform() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

double snap_probability(double x) {
  constexpr double eps = 1e-14;
  if (x < eps) return 0.0;
  if (x > 1.0 - eps) return 1.0;
  return x;
}

// For each eigenvector ψk of ρ: weight λk, acceptance |Qψk|^2 and hit
// probability |P φk|^2 on the collapsed state φk = Qψk/|Qψk|.
struct EnsembleTable {
  std::vector<double> cumulative;
  std::vector<double> accept;
  std::vector<double> hit;
};

EnsembleTable build_table(const DensityMatrix& rho, const MatrixXc& condition, const MatrixXc& target) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho.eigen());
  const auto& lambda = es.eigenvalues();
  EnsembleTable t;
  double total = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) total += std::max(0.0, lambda(k));
  double running = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    running += std::max(0.0, lambda(k)) / total;
    t.cumulative.push_back(running);
    const VectorXc psi = es.eigenvectors().col(k);
    const VectorXc projected = condition * psi;
    const double a = projected.squaredNorm();
    t.accept.push_back(snap_probability(a));
    if (a > 0.0) {
      const VectorXc collapsed = projected / std::sqrt(a);
      t.hit.push_back(snap_probability((target * collapsed).squaredNorm()));
    } else {
      t.hit.push_back(0.0);
    }
  }
  t.cumulative.back() = 1.0;
  return t;
}

MeasurementRun run(const DensityMatrix& rho, const MatrixXc& condition, const MatrixXc& target, std::uint64_t trials,
                   std::uint64_t seed) {
  if (trials < 1) throw InputError("a sampling run needs at least one trial");
  if (condition.rows() != rho.dim() || target.rows() != rho.dim()) {
    throw InputError("sampling: dimension mismatch between state and propositions");
  }
  const EnsembleTable table = build_table(rho, condition, target);
  std::atomic<std::uint64_t> accepted{0};
  std::atomic<std::uint64_t> hits{0};
  detail::parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t acc = 0;
    std::uint64_t hit = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      TrialStream s(derive_seed(seed, i));
      const double u = s.uniform();
      const auto k = static_cast<std::size_t>(
          std::upper_bound(table.cumulative.begin(), table.cumulative.end(), u) - table.cumulative.begin());
      const std::size_t idx = std::min(k, table.cumulative.size() - 1);
      if (s.uniform() < table.accept[idx]) {
        ++acc;
        if (s.uniform() < table.hit[idx]) ++hit;
      }
    }
    accepted += acc;
    hits += hit;
  });

  MeasurementRun r;
  r.seed = seed;
  r.trials = trials;
  r.accepted = accepted;
  r.hits = hits;
  if (r.accepted > 0) {
    r.estimate = static_cast<double>(r.hits) / static_cast<double>(r.accepted);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(r.accepted));
  }
  return r;
}

}  // namespace

MeasurementRun sample_proposition(const DensityMatrix& rho, const Projector& p, std::uint64_t trials,
                                  std::uint64_t seed) {
  const int d = rho.dim();
  return run(rho, MatrixXc::Identity(d, d), p.eigen(), trials, seed);
}

MeasurementRun sample_sequential(const DensityMatrix& rho, const Projector& condition, const Projector& target,
                                 std::uint64_t trials, std::uint64_t seed) {
  MeasurementRun r = run(rho, condition.eigen(), target.eigen(), trials, seed);
  if (r.accepted == 0) {
    throw OracleStarvation(
        fmt::format("no trial out of {} passed the condition; increase the number of trials", trials));
  }
  return r;
}

DeltaEstimate delta_oracle(const DensityMatrix& rho, const Projector& p, const Projector& q, const Projector& r,
                           Convention convention, std::uint64_t trials, std::uint64_t seed,
                           const ToleranceProfile& tol) {
  DeltaEstimate est;
  const Projector pq = meet(p, q, tol);
  est.joint = sample_sequential(rho, r, pq, trials, derive_seed(seed, 0xd1));
  if (convention == Convention::BThenA) {
    est.first = sample_sequential(rho, r, p, trials, derive_seed(seed, 0xd2));
    est.second = sample_sequential(rho, meet(p, r, tol), q, trials, derive_seed(seed, 0xd3));
  } else {
    est.first = sample_sequential(rho, r, q, trials, derive_seed(seed, 0xd2));
    est.second = sample_sequential(rho, meet(q, r, tol), p, trials, derive_seed(seed, 0xd3));
  }
  const double p1 = est.joint.estimate;
  const double p2 = est.first.estimate;
  const double p3 = est.second.estimate;
  est.delta = p1 - p2 * p3;
  est.stderr_ = std::sqrt(est.joint.stderr_ * est.joint.stderr_ + p3 * p3 * est.first.stderr_ * est.first.stderr_ +
                          p2 * p2 * est.second.stderr_ * est.second.stderr_);
  return est;
}

}  // namespace qinfer
