#include "qinfer/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "qinfer/io.hpp"
#include "qinfer/lattice.hpp"

namespace qinfer {

void RunConfig::validate() const {
  tolerances.validate();
  if (trials < 1) throw InputError("trials must be at least 1");
  if (dims.empty()) throw InputError("at least one dimension is required");
  for (int d : dims) {
    if (d < 2 || d > max_dim) throw InputError(fmt::format("dimension {} outside [2, {}]", d, max_dim));
  }
}

nlohmann::json RunConfig::to_json() const {
  return {{"seed", seed},
          {"dims", dims},
          {"trials", trials},
          {"max_dim", max_dim},
          {"validation_tol", tolerances.validation_tol},
          {"eigen_gap_tol", tolerances.eigen_gap_tol},
          {"probability_tol", tolerances.probability_tol}};
}

namespace {

ProbabilityTable random_table(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : w) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return ProbabilityTable(std::move(w));
}

void classical_triple(AxiomReport& report, const ProbabilityTable& table, const PlausibilityCalculus& identity,
                      const PlausibilityCalculus& square, Event a, Event b, Event c, double tol) {
  const auto& sp = table.space();
  if (table.prob(c) <= 0.0) {
    report.skip("cox_product", "w(A∧B|C)=w(B|C)w(A|B∧C)", tol);
    report.skip("sum_rule", "w(A∨B|C)=w(A|C)+w(B|C)-w(A∧B|C)", tol);
    return;
  }
  report.record("w_omega", "w(Ω|C)=1", tol, std::abs(conditional_ratio(table, sp.omega(), c) - 1.0));
  report.record("w_empty", "w(∅|C)=0", tol, std::abs(conditional_ratio(table, 0, c)));
  report.record("negation_sum", "w(A|C)+w(¬A|C)=1", tol, negation_sum_residual(table, a, c));

  if (table.prob(b & c) > 0.0) {
    report.record("cox_product", "w(A∧B|C)=w(B|C)w(A|B∧C)", tol,
                  std::max(cox_product_residual(identity, table, a, b, c),
                           cox_product_residual(square, table, a, b, c)));
  } else {
    report.skip("cox_product", "w(A∧B|C)=w(B|C)w(A|B∧C)", tol);
  }

  try {
    const SumRuleTrace t = sum_rule_trace(table, a, b, c);
    report.record("sum_rule", "w(A∨B|C)=w(A|C)+w(B|C)-w(A∧B|C)", tol, t.residual);
    report.record("sum_rule_steps", "each derivation line equals w(A∨B|C)", tol, t.max_step_deviation);
  } catch (const ConditioningOnNull&) {
    report.skip("sum_rule", "w(A∨B|C)=w(A|C)+w(B|C)-w(A∧B|C)", tol);
  }
}

}  // namespace

AxiomReport classical_suite(const ClassicalSuiteConfig& config) {
  if (config.tables < 1 || config.n_min < 1 || config.n_max < config.n_min || config.n_max > kMaxElementary) {
    throw InputError("invalid classical suite configuration");
  }
  const double tol = config.tolerance;
  AxiomReport report("classical");
  report.seed = config.seed;
  report.config = {{"seed", config.seed},       {"tables", config.tables},
                   {"n_min", config.n_min},     {"n_max", config.n_max},
                   {"tolerance", tol},          {"triples_per_table", config.triples_per_table}};

  const auto identity = PlausibilityCalculus::identity();
  const auto square = PlausibilityCalculus::power(2.0);

  for (int t = 0; t < config.tables; ++t) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    const int n = std::uniform_int_distribution<int>(config.n_min, config.n_max)(rng);
    const ProbabilityTable table = random_table(n, rng);

    report.merge(kolmogorov_check(table, tol, 100000, rng()));
    report.merge(renyi_check(table, tol, 6, 20000, rng()));

    const auto& sp = table.space();
    if (n <= 4) {
      for (Event a = 0; a <= sp.omega(); ++a) {
        for (Event b = 0; b <= sp.omega(); ++b) {
          for (Event c = 0; c <= sp.omega(); ++c) classical_triple(report, table, identity, square, a, b, c, tol);
        }
      }
    } else {
      std::uniform_int_distribution<Event> pick(0, sp.omega());
      for (std::uint64_t s = 0; s < config.triples_per_table; ++s) {
        const Event a = pick(rng), b = pick(rng), c = pick(rng);
        classical_triple(report, table, identity, square, a, b, c, tol);
      }
    }
  }
  report.instances = static_cast<std::uint64_t>(config.tables);

  // Functional-equation checks on the 64-point grid over [1e-6, 1 - 1e-6].
  constexpr int kGrid = 64;
  constexpr double kEps = 1e-6;
  for (double m : {0.5, 1.0, 2.0, 5.0}) {
    for (int i = 0; i < kGrid; ++i) {
      const double x = kEps + (1.0 - 2.0 * kEps) * i / (kGrid - 1);
      report.record("negation_involution", "S(S(x))=x, S(x)=(1-x^m)^(1/m)", tol, negation_involution_residual(m, x));
    }
    report.record("negation_involution", "S(S(x))=x, S(x)=(1-x^m)^(1/m)", tol, negation_involution_residual(m, 0.0));
    report.record("negation_involution", "S(S(x))=x, S(x)=(1-x^m)^(1/m)", tol, negation_involution_residual(m, 1.0));
  }
  for (const auto* calc : {&identity, &square}) {
    report.record("associativity_F", "F(F(x,y),z)=F(x,F(y,z))", tol,
                  max_associativity_residual([calc](double x, double y) { return calc->product(x, y); }, kGrid, kEps));
  }
  return report;
}

AxiomReport quantum_renyi_suite(int dim, int count, std::uint64_t seed, int batch, const QuantumRenyiTolerances& checks) {
  if (batch < 1) throw InputError("batch must be positive");
  const auto instances = random_renyi_instances(dim, count, seed);
  AxiomReport report("quantum-renyi");
  report.seed = seed;
  for (std::size_t begin = 0, b = 0; begin < instances.size(); begin += static_cast<std::size_t>(batch), ++b) {
    const std::size_t end = std::min(instances.size(), begin + static_cast<std::size_t>(batch));
    std::mt19937_64 rng(derive_seed(seed, 0x5eed, b));
    const double mix = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityMatrix rho = random_state(dim, mix, rng());
    std::vector<QuantumRenyiInstance> slice(instances.begin() + static_cast<std::ptrdiff_t>(begin),
                                            instances.begin() + static_cast<std::ptrdiff_t>(end));
    AxiomReport part = quantum_renyi_check(rho, slice, checks);
    part.config.erase("skipped_instances");
    part.skipped_notes.clear();
    report.merge(part);
  }
  for (const auto& c : report.checks()) {
    if (c.skipped > 0) {
      report.skipped_notes.push_back(fmt::format("dim {}: {} skipped {} of {} instances whose side condition fails",
                                                 dim, c.id, c.skipped, c.skipped + c.evaluated));
    }
  }
  report.config = {{"dim", dim}, {"count", count}, {"batch", batch}, {"tolerance_one", checks.one},
                   {"tolerance_additivity", checks.additivity}, {"tolerance_chain", checks.chain}};
  return report;
}

AxiomReport commuting_product_rule_suite(int dim, int count, std::uint64_t seed, double tolerance, double min_trace) {
  AxiomReport report("commuting-product-rule");
  report.seed = seed;
  report.config = {{"dim", dim}, {"count", count}, {"tolerance", tolerance}, {"min_trace", min_trace}};
  const std::uint64_t max_attempts = 100ULL * static_cast<std::uint64_t>(std::max(count, 1));
  const auto& tol = default_tolerances();
  std::uint64_t done = 0;
  for (std::uint64_t attempt = 0; attempt < max_attempts && done < static_cast<std::uint64_t>(count); ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, attempt));
    const MatrixXc u = random_unitary(dim, rng());
    std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << dim) - 1);
    std::vector<Projector> triple;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t mask = pick(rng);
      MatrixXc m = MatrixXc::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        if (mask >> i & 1U) m += u.col(i) * u.col(i).adjoint();
      }
      triple.emplace_back(m);
    }
    const double mix = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityMatrix rho = random_state(dim, mix, rng());
    const auto& [p, q, r] = std::tie(triple[0], triple[1], triple[2]);

    const double tr_r = born(rho, r);
    const double tr_pr = born(rho, meet(p, r, tol));
    const double tr_qr = born(rho, meet(q, r, tol));
    bool evaluated = false;
    if (tr_r > min_trace && tr_pr > min_trace) {
      report.record("commuting_delta_b_then_a", "Δ=Pr(P∧Q|R)-Pr(P|R)Pr(Q|P∧R)=0 in a Boolean subalgebra", tolerance,
                    std::abs(product_rule_residual(rho, p, q, r, Convention::BThenA).delta));
      evaluated = true;
    } else {
      report.skip("commuting_delta_b_then_a", "Δ=Pr(P∧Q|R)-Pr(P|R)Pr(Q|P∧R)=0 in a Boolean subalgebra", tolerance);
    }
    if (tr_r > min_trace && tr_qr > min_trace) {
      report.record("commuting_delta_a_then_b", "Δ'=Pr(P∧Q|R)-Pr(Q|R)Pr(P|Q∧R)=0 in a Boolean subalgebra", tolerance,
                    std::abs(product_rule_residual(rho, p, q, r, Convention::AThenB).delta));
    } else {
      report.skip("commuting_delta_a_then_b", "Δ'=Pr(P∧Q|R)-Pr(Q|R)Pr(P|Q∧R)=0 in a Boolean subalgebra", tolerance);
    }
    if (evaluated) ++done;
  }
  report.instances = done;
  return report;
}

AxiomReport quantum_suite(const RunConfig& config) {
  config.validate();
  AxiomReport report("quantum");
  report.seed = config.seed;
  const int count = static_cast<int>(config.trials);
  const int resolutions = std::max(1, count / 10);
  for (int d : config.dims) {
    const std::uint64_t s = derive_seed(config.seed, static_cast<std::uint64_t>(d));
    report.merge(quantum_renyi_suite(d, count, derive_seed(s, 1)));
    const DensityMatrix rho = random_state(d, 0.5, derive_seed(s, 2), config.max_dim);
    report.merge(frame_additivity_check(rho, resolutions, derive_seed(s, 3)));
    report.merge(commuting_product_rule_suite(d, count, derive_seed(s, 4)));
  }
  report.config = config.to_json();
  report.config["frame_resolutions_per_dim"] = resolutions;
  return report;
}

double affine_fit_residual(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("affine fit needs at least two matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y[i] - (my + slope * (x[i] - mx))));
  }
  return worst;
}

DeltaCurve delta_curve(const DeltaCurveConfig& config) {
  if (config.r_steps < 2) throw InputError("delta curve needs at least two r steps");
  DeltaCurve curve;
  curve.report = AxiomReport("delta-curve");
  curve.report.seed = config.seed;
  nlohmann::json conventions = nlohmann::json::array();
  for (Convention c : config.conventions) conventions.push_back(to_string(c));
  curve.report.config = {{"r_steps", config.r_steps},   {"conventions", conventions},
                         {"oracle_trials", config.oracle_trials}, {"seed", config.seed},
                         {"endpoint_tol", config.endpoint_tol},   {"affine_tol", config.affine_tol}};

  for (Convention conv : config.conventions) {
    std::vector<double> rs, deltas;
    for (int i = 0; i < config.r_steps; ++i) {
      DeltaCurveRow row;
      row.r = (i == config.r_steps - 1) ? 1.0 : static_cast<double>(i) / (config.r_steps - 1);
      row.convention = conv;
      const TwoQubitFamily fam = two_qubit_family(row.r);
      try {
        ViolationRecord rec = product_rule_residual(fam.rho, fam.p, fam.q, fam.r, conv);
        rec.r = row.r;
        row.record = rec;
        row.status = "ok";
        rs.push_back(row.r);
        deltas.push_back(rec.delta);
      } catch (const ConditioningOnNull& e) {
        row.status = "conditioning-on-null:" + e.factor();
      }
      if (config.oracle_trials > 0 && row.record) {
        row.oracle = delta_oracle(fam.rho, fam.p, fam.q, fam.r, conv, config.oracle_trials,
                                  derive_seed(config.seed, static_cast<std::uint64_t>(i)));
        const double z = z_score(row.oracle->delta, row.record->delta, row.oracle->stderr_);
        curve.report.record("oracle_agreement_" + to_string(conv), "|Δ_MC-Δ|/σ ≤ 5", 5.0, z);
      }
      curve.rows.push_back(std::move(row));
    }

    const std::string tag = to_string(conv);
    if (deltas.size() < static_cast<std::size_t>(config.r_steps)) {
      const auto missing = static_cast<std::uint64_t>(config.r_steps) - deltas.size();
      curve.report.skipped_notes.push_back(
          fmt::format("{}: {} of {} grid points hit conditioning on a null proposition", tag, missing, config.r_steps));
    }
    if (deltas.empty()) continue;
    if (rs.back() == 1.0) {
      curve.report.record("delta_at_r1_" + tag, "Δ(r=1)=0", config.endpoint_tol, std::abs(deltas.back()));
    }
    if (deltas.size() >= 2) {
      curve.report.record("affine_in_r_" + tag, "Δ(r) affine in r", config.affine_tol, affine_fit_residual(rs, deltas));
      double rise = 0.0;
      for (std::size_t i = 1; i < deltas.size(); ++i) {
        rise = std::max(rise, std::abs(deltas[i]) - std::abs(deltas[i - 1]));
      }
      curve.report.record("monotone_abs_delta_" + tag, "|Δ(r)| non-increasing in r", config.endpoint_tol, rise);
    }
  }
  curve.report.instances = curve.rows.size();

  // Computed Δ(0) (b-then-a) against the closed form.
  const TwoQubitFamily pure = two_qubit_family(0.0);
  const ViolationRecord at0 = product_rule_residual(pure.rho, pure.p, pure.q, pure.r, Convention::BThenA);
  const TwoQubitFamily mixed = two_qubit_family(1.0);
  const ViolationRecord at1 = product_rule_residual(mixed.rho, mixed.p, mixed.q, mixed.r, Convention::BThenA);
  const double reference = closed_form_delta(0.0);
  curve.comparison = {{"convention", to_string(Convention::BThenA)},
                      {"r", 0.0},
                      {"computed_delta", at0.delta},
                      {"computed_components", at0.components},
                      {"computed_slope", at1.delta - at0.delta},
                      {"reference_formula", "((sqrt(2)-1)/2)(r-1)"},
                      {"reference_delta", reference},
                      {"reference_slope", (std::sqrt(2.0) - 1.0) / 2.0},
                      {"difference", at0.delta - reference},
                      {"agrees", std::abs(at0.delta - reference) <= 1e-9}};
  try {
    const ViolationRecord alt = product_rule_residual(pure.rho, pure.p, pure.q, pure.r, Convention::AThenB);
    curve.comparison["a_then_b_delta"] = alt.delta;
  } catch (const ConditioningOnNull& e) {
    curve.comparison["a_then_b_delta"] = nullptr;
    curve.comparison["a_then_b_status"] = "conditioning-on-null:" + e.factor();
  }
  for (const auto& row : curve.rows) {
    if (row.r == 0.0 && row.oracle && row.convention == Convention::BThenA) {
      curve.comparison["oracle_delta"] = row.oracle->delta;
      curve.comparison["oracle_stderr"] = row.oracle->stderr_;
    }
  }
  return curve;
}

std::string delta_curve_csv(const DeltaCurve& curve, bool with_oracle) {
  std::string out = "r,delta,convention,pr_joint,pr_first,pr_second,status";
  if (with_oracle) out += ",oracle_delta,oracle_stderr";
  out += "\n";
  const std::string nan = "nan";
  for (const auto& row : curve.rows) {
    if (row.record) {
      const auto& rec = *row.record;
      out += fmt::format("{},{},{},{},{},{},{}", format_g17(row.r), format_g17(rec.delta), to_string(row.convention),
                         format_g17(rec.components[0]), format_g17(rec.components[1]),
                         format_g17(rec.components[2]), row.status);
    } else {
      out += fmt::format("{},{},{},{},{},{},{}", format_g17(row.r), nan, to_string(row.convention), nan, nan, nan,
                         row.status);
    }
    if (with_oracle) {
      if (row.oracle) {
        out += fmt::format(",{},{}", format_g17(row.oracle->delta), format_g17(row.oracle->stderr_));
      } else {
        out += "," + nan + "," + nan;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace qinfer
