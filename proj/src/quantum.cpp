#include "qinfer/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "qinfer/io.hpp"
#include "qinfer/lattice.hpp"
#include "parallel.hpp"

namespace qinfer {

std::string to_string(Convention c) {
  return c == Convention::BThenA ? "b-then-a" : "a-then-b";
}

Convention convention_from_string(const std::string& s) {
  if (s == "b-then-a") return Convention::BThenA;
  if (s == "a-then-b") return Convention::AThenB;
  throw InputError(fmt::format("unknown convention '{}' (expected b-then-a or a-then-b)", s));
}

namespace {

void require_same_dim(int a, int b, const char* op) {
  if (a != b) throw InputError(fmt::format("{}: dimension mismatch {} vs {}", op, a, b));
}

ConditionalValue lueders_named(const DensityMatrix& rho, const Projector& p, const Projector& q,
                               const ToleranceProfile& tol, const std::string& factor) {
  require_same_dim(rho.dim(), p.dim(), "lueders");
  require_same_dim(rho.dim(), q.dim(), "lueders");
  const double den = trace_inner(rho.eigen(), q.eigen()).real();
  if (den <= tol.probability_tol) throw ConditioningOnNull(factor, den);
  const MatrixXc sandwich = q.eigen() * rho.eigen() * q.eigen();
  const double num = trace_inner(sandwich, p.eigen()).real();
  return ConditionalValue{num / den, num, den, "Lüders: tr(QρQP)/tr(ρQ)"};
}

}  // namespace

DensityMatrix conditioned_state(const DensityMatrix& rho, const Projector& q, const ToleranceProfile& tol) {
  require_same_dim(rho.dim(), q.dim(), "conditioned_state");
  const double den = trace_inner(rho.eigen(), q.eigen()).real();
  if (den <= tol.probability_tol) throw ConditioningOnNull("Q", den);
  MatrixXc updated = q.eigen() * rho.eigen() * q.eigen() / den;
  // Tolerance scales with 1/tr(ρQ), the amplification of the update.
  return DensityMatrix(updated, std::max(rho.tol(), tol.validation_tol / den));
}

ConditionalValue lueders(const DensityMatrix& rho, const Projector& p, const Projector& q,
                         const ToleranceProfile& tol) {
  return lueders_named(rho, p, q, tol, "Q");
}

double born(const DensityMatrix& rho, const Projector& p) {
  require_same_dim(rho.dim(), p.dim(), "born");
  return trace_inner(rho.eigen(), p.eigen()).real();
}

namespace {

constexpr const char* kQOne = "Pr(Q|Q)=1";
constexpr const char* kQAdd = "Pr(P∨Q|R)=Pr(P|R)+Pr(Q|R) for PQ=0";
constexpr const char* kQAbc = "Pr(P∧Q|Q)=Pr(P∧Q|R)/Pr(Q|R) for Q<R, Pr(Q|R)>0";

}  // namespace

AxiomReport quantum_renyi_check(const DensityMatrix& rho, const std::vector<QuantumRenyiInstance>& instances,
                                const QuantumRenyiTolerances& checks, const ToleranceProfile& tol) {
  AxiomReport report("quantum-renyi");
  report.config = {{"dim", rho.dim()},
                   {"tolerance_one", checks.one},
                   {"tolerance_additivity", checks.additivity},
                   {"tolerance_chain", checks.chain},
                   {"probability_tol", tol.probability_tol}};
  auto positive = [&](const Projector& x) { return born(rho, x) > tol.probability_tol; };

  std::vector<std::size_t> skipped_add;
  std::vector<std::size_t> skipped_chain;
  std::size_t index = 0;
  for (const auto& inst : instances) {
    ++report.instances;
    for (const Projector* x : {&inst.q, &inst.r}) {
      if (positive(*x)) {
        report.record("qone", kQOne, checks.one, std::abs(lueders(rho, *x, *x, tol).value - 1.0));
      } else {
        report.skip("qone", kQOne, checks.one);
      }
    }

    if (orthogonal(inst.p, inst.q, tol.validation_tol) && positive(inst.r)) {
      const Projector pq = join(inst.p, inst.q, tol);
      const double lhs = lueders(rho, pq, inst.r, tol).value;
      const double rhs = lueders(rho, inst.p, inst.r, tol).value + lueders(rho, inst.q, inst.r, tol).value;
      report.record("qc_additivity", kQAdd, checks.additivity, std::abs(lhs - rhs));
    } else {
      report.skip("qc_additivity", kQAdd, checks.additivity);
      skipped_add.push_back(index);
    }

    const bool nested = less_equal(inst.q, inst.r, tol.validation_tol);
    if (nested && positive(inst.q) && positive(inst.r) &&
        lueders(rho, inst.q, inst.r, tol).value > tol.probability_tol) {
      const Projector pq = meet(inst.p, inst.q, tol);
      const double lhs = lueders(rho, pq, inst.q, tol).value;
      const double rhs = lueders(rho, pq, inst.r, tol).value / lueders(rho, inst.q, inst.r, tol).value;
      report.record("qabc", kQAbc, checks.chain, std::abs(lhs - rhs));
    } else {
      report.skip("qabc", kQAbc, checks.chain);
      skipped_chain.push_back(index);
    }
    ++index;
  }
  if (!skipped_add.empty()) {
    report.skipped_notes.push_back(fmt::format("qc_additivity skipped {} instances lacking PQ=0 or tr(ρR)>0",
                                               skipped_add.size()));
  }
  if (!skipped_chain.empty()) {
    report.skipped_notes.push_back(fmt::format("qabc skipped {} instances lacking Q<R or Pr(Q|R)>0",
                                               skipped_chain.size()));
  }
  report.config["skipped_instances"] = {{"qc_additivity", skipped_add}, {"qabc", skipped_chain}};
  return report;
}

namespace {

MatrixXc column_projector(const MatrixXc& basis, const std::vector<int>& cols) {
  MatrixXc u(basis.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) u.col(static_cast<Eigen::Index>(k)) = basis.col(cols[k]);
  return u * u.adjoint();
}

std::vector<int> iota_range(int begin, int end) {
  std::vector<int> v;
  for (int i = begin; i < end; ++i) v.push_back(i);
  return v;
}

}  // namespace

std::vector<QuantumRenyiInstance> random_renyi_instances(int dim, int count, std::uint64_t seed) {
  if (dim < 2) throw InputError("quantum Rényi instances need dim >= 2");
  std::vector<QuantumRenyiInstance> out;
  out.reserve(static_cast<std::size_t>(2 * count));
  for (int k = 0; k < count; ++k) {
    std::mt19937_64 rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(k)));
    auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    // Orthogonal pair from one basis, conditioning projector from another.
    const MatrixXc u = random_unitary(dim, rng());
    const int kp = uniform_int(1, dim - 1);
    const int kq = uniform_int(1, dim - kp);
    Projector p(column_projector(u, iota_range(0, kp)));
    Projector q(column_projector(u, iota_range(kp, kp + kq)));
    Projector r = random_projector(dim, uniform_int(1, dim), rng());
    out.push_back({std::move(p), std::move(q), std::move(r)});
  }
  for (int k = 0; k < count; ++k) {
    std::mt19937_64 rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1));
    auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    // Nested chain Q < R; P spans part of Q(H) plus random directions so
    // that P∧Q is nonzero and P does not commute with Q or R.
    const MatrixXc u = random_unitary(dim, rng());
    const int kr = uniform_int(1, dim);
    const int kq = uniform_int(1, kr);
    const MatrixXc qm = column_projector(u, iota_range(0, kq));
    Projector r(column_projector(u, iota_range(0, kr)));
    Projector q(qm);

    const int inside = uniform_int(1, kq);
    const int outside = uniform_int(0, dim - inside);
    std::vector<VectorXc> span;
    for (int i = 0; i < inside; ++i) {
      VectorXc v = qm * random_unit_vector(dim, rng());
      span.push_back(v);
    }
    for (int i = 0; i < outside; ++i) span.push_back(random_unit_vector(dim, rng()));
    Projector p = projector_from_basis(span, dim);
    out.push_back({std::move(p), std::move(q), std::move(r)});
  }
  return out;
}

ViolationRecord product_rule_residual(const DensityMatrix& rho, const Projector& p, const Projector& q,
                                      const Projector& r, Convention convention, const ToleranceProfile& tol) {
  require_same_dim(rho.dim(), p.dim(), "product_rule_residual");
  require_same_dim(rho.dim(), q.dim(), "product_rule_residual");
  require_same_dim(rho.dim(), r.dim(), "product_rule_residual");
  ViolationRecord rec;
  rec.convention = convention;
  const Projector pq = meet(p, q, tol);
  const double joint = lueders_named(rho, pq, r, tol, "R").value;
  double first = 0.0;
  double second = 0.0;
  if (convention == Convention::BThenA) {
    first = lueders_named(rho, p, r, tol, "R").value;
    second = lueders_named(rho, q, meet(p, r, tol), tol, "P∧R").value;
  } else {
    first = lueders_named(rho, q, r, tol, "R").value;
    second = lueders_named(rho, p, meet(q, r, tol), tol, "Q∧R").value;
  }
  rec.components = {joint, first, second};
  rec.delta = joint - first * second;
  return rec;
}

TwoQubitFamily two_qubit_family(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InputError(fmt::format("mixing parameter r = {} outside [0, 1]", r));
  Eigen::Matrix2cd up = Eigen::Matrix2cd::Zero();
  up(0, 0) = 1.0;
  Eigen::Matrix2cd right;
  right << 0.5, 0.5, 0.5, 0.5;  // |→⟩⟨→| with |→⟩ = (1, 1)/√2
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    MatrixXc k(4, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    }
    return k;
  };
  MatrixXc rho = (r / 4.0) * MatrixXc::Identity(4, 4) + (1.0 - r) * kron(up, up);
  return TwoQubitFamily{Projector(kron(up, id)), Projector(kron(id, up)), Projector(kron(id, right)),
                        DensityMatrix(rho)};
}

double closed_form_delta(double r) {
  return (std::sqrt(2.0) - 1.0) / 2.0 * (r - 1.0);
}

namespace {

struct ScanTrial {
  std::optional<ViolationRecord> record;
  bool rejected_commuting = false;
  bool rejected_null = false;
};

std::vector<int> random_nonempty_subset(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << dim) - 1);
  const std::uint64_t mask = pick(rng);
  std::vector<int> cols;
  for (int i = 0; i < dim; ++i) {
    if (mask >> i & 1U) cols.push_back(i);
  }
  return cols;
}

ScanTrial scan_trial(const DeltaScanOptions& opt, std::uint64_t index) {
  std::mt19937_64 rng(derive_seed(opt.seed, index));
  const auto [lo, hi] = opt.purity_mix_range;
  const double mix = lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
  const DensityMatrix rho = random_state(opt.dim, mix, rng(), opt.max_dim);

  std::vector<Projector> triple;
  if (opt.common_eigenbasis) {
    const MatrixXc u = random_unitary(opt.dim, rng());
    for (int k = 0; k < 3; ++k) triple.emplace_back(column_projector(u, random_nonempty_subset(opt.dim, rng)));
  } else {
    std::uniform_int_distribution<int> rank(1, opt.dim);
    for (int k = 0; k < 3; ++k) {
      const int rk = rank(rng);
      triple.push_back(random_projector(opt.dim, rk, rng()));
    }
  }

  ScanTrial out;
  if (!opt.common_eigenbasis && commutes(triple[0], triple[1]) && commutes(triple[0], triple[2]) &&
      commutes(triple[1], triple[2])) {
    out.rejected_commuting = true;
    return out;
  }
  try {
    ViolationRecord rec = product_rule_residual(rho, triple[0], triple[1], triple[2], opt.convention);
    rec.r = mix;
    out.record = rec;
  } catch (const ConditioningOnNull&) {
    out.rejected_null = true;
  }
  return out;
}

}  // namespace

DeltaScanResult delta_scan(const DeltaScanOptions& opt) {
  if (opt.dim < 2 || opt.dim > opt.max_dim) {
    throw InputError(fmt::format("delta_scan dimension {} outside [2, {}]", opt.dim, opt.max_dim));
  }
  if (opt.trials < 1) throw InputError("delta_scan needs at least one trial");
  const auto [lo, hi] = opt.purity_mix_range;
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw InputError("purity_mix_range must satisfy 0 <= lo <= hi <= 1");

  std::vector<ScanTrial> trials(opt.trials);
  detail::parallel_chunks(opt.trials, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) trials[i] = scan_trial(opt, i);
  });

  DeltaScanResult result;
  for (auto& t : trials) {
    if (t.record) result.records.push_back(*t.record);
    result.rejected_commuting += t.rejected_commuting;
    result.rejected_null += t.rejected_null;
  }
  std::stable_sort(result.records.begin(), result.records.end(), [](const ViolationRecord& a, const ViolationRecord& b) {
    return std::abs(a.delta) > std::abs(b.delta);
  });
  return result;
}

namespace {

constexpr const char* kFrameSum = "Σi Pr(Pi)=1";
constexpr const char* kFramePair = "Pr(Pi∨Pj)=Pr(Pi)+Pr(Pj)";

}  // namespace

AxiomReport frame_additivity_check(const DensityMatrix& rho, const std::vector<std::vector<Projector>>& resolutions,
                                   double check_tol, const ToleranceProfile& tol) {
  AxiomReport report("frame-additivity");
  const int d = rho.dim();
  report.config = {{"dim", d}, {"resolutions", resolutions.size()}, {"tolerance", check_tol},
                   {"gleason_hypothesis", d >= 3}};
  if (d < 3) {
    report.warnings.push_back(fmt::format("dim {} < 3: outside the hypothesis of Gleason's theorem", d));
  }
  for (const auto& frame : resolutions) {
    MatrixXc total = MatrixXc::Zero(d, d);
    for (const auto& p : frame) {
      require_same_dim(d, p.dim(), "frame_additivity_check");
      total += p.eigen();
    }
    if (max_abs(total - MatrixXc::Identity(d, d)) > tol.validation_tol) {
      throw InputError("frame projectors do not resolve the identity");
    }
    std::vector<double> probs;
    double sum = 0.0;
    for (const auto& p : frame) {
      probs.push_back(born(rho, p));
      sum += probs.back();
    }
    report.record("frame_sum", kFrameSum, check_tol, std::abs(sum - 1.0));
    for (std::size_t i = 0; i < frame.size(); ++i) {
      for (std::size_t j = i + 1; j < frame.size(); ++j) {
        const double joined = born(rho, join(frame[i], frame[j], tol));
        report.record("pairwise_additivity", kFramePair, check_tol, std::abs(joined - probs[i] - probs[j]));
      }
    }
    ++report.instances;
  }
  return report;
}

AxiomReport frame_additivity_check(const DensityMatrix& rho, int resolutions, std::uint64_t seed, double check_tol,
                                   const ToleranceProfile& tol) {
  const int d = rho.dim();
  std::vector<std::vector<Projector>> frames;
  frames.reserve(static_cast<std::size_t>(resolutions));
  for (int k = 0; k < resolutions; ++k) {
    const MatrixXc u = random_unitary(d, derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::vector<Projector> frame;
    for (int i = 0; i < d; ++i) frame.emplace_back(MatrixXc(u.col(i) * u.col(i).adjoint()));
    frames.push_back(std::move(frame));
  }
  AxiomReport report = frame_additivity_check(rho, frames, check_tol, tol);
  report.seed = seed;
  return report;
}

std::string violation_records_csv(const std::vector<ViolationRecord>& records) {
  std::string out = "r,delta,convention,pr_joint,pr_first,pr_second\n";
  for (const auto& rec : records) {
    out += fmt::format("{},{},{},{},{},{}\n", format_g17(rec.r), format_g17(rec.delta), to_string(rec.convention),
                       format_g17(rec.components[0]), format_g17(rec.components[1]), format_g17(rec.components[2]));
  }
  return out;
}

}  // namespace qinfer
