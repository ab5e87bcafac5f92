// qinfer: batch verification runs over the inference library.
//
// Exit status: 0 when every executed check passes, 1 when a check fails or
// a computation hits a domain error (the report is still written), 2 for
// usage and input errors.

#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qinfer/boolean_subalgebra.hpp"
#include "qinfer/errors.hpp"
#include "qinfer/io.hpp"
#include "qinfer/lattice.hpp"
#include "qinfer/oracle.hpp"
#include "qinfer/quantum.hpp"
#include "qinfer/suites.hpp"

using namespace qinfer;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Raised for bad flag values found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("QINFER_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 10);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("QINFER_SEED must be a non-negative integer, got '{}'", env));
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void echo_config(const std::string& command, const json& config) {
  std::cerr << "qinfer " << command << " config: " << config.dump() << "\n";
}

std::vector<Convention> parse_conventions(const std::string& s) {
  if (s == "both") return {Convention::BThenA, Convention::AThenB};
  try {
    return {convention_from_string(s)};
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

struct OperatorInputs {
  std::string path;
  std::string rho = "rho";
  std::string p = "P";
  std::string q = "Q";
};

int report_exit(const AxiomReport& report) { return report.pass() ? kPass : kCheckFailed; }

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t env_seed = 0;
  try {
    env_seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "qinfer: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Numerical verification of quantum conditional probability and inference rules"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::uint64_t seed = env_seed;
  std::string out;
  std::string report_path;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base seed (default from QINFER_SEED, else 0)");
    cmd->add_option("--out", out, "Output path ('-' or omitted for stdout)");
  };

  // verify-classical
  ClassicalSuiteConfig classical;
  auto* vc = app.add_subcommand("verify-classical", "Kolmogorov, Rényi, Cox and sum-rule suites on random tables");
  add_common(vc);
  vc->add_option("--tables", classical.tables, "Number of random tables")->check(CLI::PositiveNumber);
  vc->add_option("--n-min", classical.n_min, "Smallest outcome count")->check(CLI::Range(1, 20));
  vc->add_option("--n-max", classical.n_max, "Largest outcome count")->check(CLI::Range(1, 20));
  vc->add_option("--tolerance", classical.tolerance, "Residual tolerance")->check(CLI::PositiveNumber);
  vc->add_option("--triples", classical.triples_per_table, "Sampled (A,B,C) triples per table above 4 outcomes");

  // verify-quantum
  RunConfig quantum;
  auto* vq = app.add_subcommand("verify-quantum", "Quantum Rényi, frame additivity and commuting product-rule suites");
  add_common(vq);
  vq->add_option("--dims", quantum.dims, "Hilbert space dimensions")->delimiter(',');
  vq->add_option("--trials", quantum.trials, "Randomized instances per dimension")->check(CLI::PositiveNumber);
  vq->add_option("--max-dim", quantum.max_dim, "Largest accepted dimension")->check(CLI::PositiveNumber);

  // closure
  std::string closure_in;
  std::vector<std::string> closure_labels;
  double closure_tol = 1e-11;
  auto* cl = app.add_subcommand("closure", "Boolean closure of commuting projectors from an operator file");
  add_common(cl);
  cl->add_option("--in", closure_in, "Operator JSON file")->required();
  cl->add_option("--labels", closure_labels, "Generators to use (default: every matrix)")->delimiter(',');
  cl->add_option("--tolerance", closure_tol, "Boolean identity tolerance")->check(CLI::PositiveNumber);

  // lueders / born
  OperatorInputs ops;
  auto* lu = app.add_subcommand("lueders", "Pr(P|Q) = tr(QρQP)/tr(ρQ) from an operator file");
  add_common(lu);
  lu->add_option("--in", ops.path, "Operator JSON file")->required();
  lu->add_option("--rho", ops.rho, "Label of the density matrix");
  lu->add_option("--p", ops.p, "Label of the target projector");
  lu->add_option("--q", ops.q, "Label of the conditioning projector");

  auto* bo = app.add_subcommand("born", "Pr(P) = tr(ρP) from an operator file");
  add_common(bo);
  bo->add_option("--in", ops.path, "Operator JSON file")->required();
  bo->add_option("--rho", ops.rho, "Label of the density matrix");
  bo->add_option("--p", ops.p, "Label of the projector");

  // delta-curve
  DeltaCurveConfig curve_cfg;
  std::string curve_conv = "both";
  auto* dc = app.add_subcommand("delta-curve", "CSV of the product-rule residual on the two-qubit family");
  add_common(dc);
  dc->add_option("--r-steps", curve_cfg.r_steps, "Grid points on [0, 1]")->check(CLI::Range(2, 1000000));
  dc->add_option("--convention", curve_conv, "b-then-a, a-then-b or both")
      ->check(CLI::IsMember({"b-then-a", "a-then-b", "both"}));
  dc->add_option("--oracle", curve_cfg.oracle_trials, "Monte Carlo trials per grid point (0 disables)");
  dc->add_option("--report", report_path, "Path for the JSON report");

  // delta-scan
  DeltaScanOptions scan;
  std::string scan_conv = "b-then-a";
  double mix_min = 0.0, mix_max = 0.0;
  std::size_t top = 0;
  std::optional<double> min_violation;
  auto* ds = app.add_subcommand("delta-scan", "Randomized search for product-rule violations");
  add_common(ds);
  ds->add_option("--dim", scan.dim, "Hilbert space dimension");
  ds->add_option("--trials", scan.trials, "Random triples to draw")->check(CLI::PositiveNumber);
  ds->add_option("--mix-min", mix_min, "Lower purity mix (0 = pure)")->check(CLI::Range(0.0, 1.0));
  ds->add_option("--mix-max", mix_max, "Upper purity mix")->check(CLI::Range(0.0, 1.0));
  ds->add_option("--convention", scan_conv, "b-then-a or a-then-b")->check(CLI::IsMember({"b-then-a", "a-then-b"}));
  ds->add_flag("--common-eigenbasis", scan.common_eigenbasis, "Draw commuting triples from one eigenbasis");
  ds->add_option("--top", top, "Keep only the largest |delta| records (0 keeps all)");
  ds->add_option("--min-violation", min_violation, "Fail unless some |delta| exceeds this value");
  ds->add_option("--max-dim", scan.max_dim, "Largest accepted dimension")->check(CLI::PositiveNumber);
  ds->add_option("--report", report_path, "Path for the JSON report");

  // mc-oracle
  std::uint64_t mc_trials = 1000000;
  bool mc_unconditioned = false;
  auto* mc = app.add_subcommand("mc-oracle", "Sequential-measurement sampling against the trace formulas");
  add_common(mc);
  mc->add_option("--in", ops.path, "Operator JSON file")->required();
  mc->add_option("--rho", ops.rho, "Label of the density matrix");
  mc->add_option("--p", ops.p, "Label of the target projector");
  mc->add_option("--q", ops.q, "Label of the conditioning projector");
  mc->add_flag("--unconditioned", mc_unconditioned, "Sample Pr(P) without a condition");
  mc->add_option("--trials", mc_trials, "Trials N")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*vc) {
      if (classical.n_min > classical.n_max) throw UsageError("--n-min exceeds --n-max");
      classical.seed = seed;
      AxiomReport report = classical_suite(classical);
      echo_config("verify-classical", report.config);
      emit(out, dump(report.to_json()));
      return report_exit(report);
    }

    if (*vq) {
      quantum.seed = seed;
      quantum.validate();
      echo_config("verify-quantum", quantum.to_json());
      AxiomReport report = quantum_suite(quantum);
      emit(out, dump(report.to_json()));
      return report_exit(report);
    }

    if (*cl) {
      const OperatorSet set = OperatorSet::from_json(read_json_file(closure_in));
      std::vector<Projector> generators;
      std::vector<std::string> labels;
      if (closure_labels.empty()) {
        for (const auto& m : set.matrices) labels.push_back(m.label);
      } else {
        labels = closure_labels;
      }
      for (const auto& l : labels) generators.emplace_back(set.get(l));
      const json config = {{"command", "closure"}, {"in", closure_in}, {"labels", labels},
                           {"tolerance", closure_tol}, {"seed", seed}};
      echo_config("closure", config);
      const BooleanSubalgebra algebra = boolean_closure(generators, set.dim, labels);
      AxiomReport report = verify_boolean_identities(algebra, closure_tol, 4096, seed);
      report.config = config;
      json elements = json::array();
      for (ElementMask m = 0; m <= algebra.full_mask(); ++m) {
        json atoms = json::array();
        for (int k = 0; k < algebra.atom_count(); ++k) {
          if (m >> k & 1U) atoms.push_back(k);
        }
        elements.push_back({{"mask", m}, {"atoms", atoms}, {"rank", algebra.element(m).rank()}});
        if (m == algebra.full_mask()) break;
      }
      const json doc = {{"config", config},
                        {"atom_count", algebra.atom_count()},
                        {"element_count", algebra.element_count()},
                        {"algebra", algebra.to_json()},
                        {"elements", elements},
                        {"report", report.to_json()}};
      emit(out, dump(doc));
      return report_exit(report);
    }

    if (*lu || *bo) {
      const OperatorSet set = OperatorSet::from_json(read_json_file(ops.path));
      const DensityMatrix rho{ComplexMatrix(set.get(ops.rho))};
      const Projector p{ComplexMatrix(set.get(ops.p))};
      json config = {{"in", ops.path}, {"rho", ops.rho}, {"p", ops.p}, {"seed", seed}};
      json doc;
      if (*lu) {
        config["command"] = "lueders";
        config["q"] = ops.q;
        echo_config("lueders", config);
        const Projector q{ComplexMatrix(set.get(ops.q))};
        try {
          const ConditionalValue v = lueders(rho, p, q);
          doc = {{"config", config},
                 {"value", v.value},
                 {"numerator", v.numerator},
                 {"denominator", v.denominator},
                 {"note", v.convention_note}};
        } catch (const ConditioningOnNull& e) {
          doc = {{"config", config}, {"error", e.what()}, {"null_factor", e.factor()}, {"trace", e.trace()}};
          emit(out, dump(doc));
          return kCheckFailed;
        }
      } else {
        config["command"] = "born";
        echo_config("born", config);
        doc = {{"config", config}, {"value", born(rho, p)}};
      }
      emit(out, dump(doc));
      return kPass;
    }

    if (*dc) {
      curve_cfg.seed = seed;
      curve_cfg.conventions = parse_conventions(curve_conv);
      const DeltaCurve curve = delta_curve(curve_cfg);
      echo_config("delta-curve", curve.report.config);
      emit(out, delta_curve_csv(curve, curve_cfg.oracle_trials > 0));
      if (!report_path.empty()) {
        json doc = curve.report.to_json();
        doc["comparison"] = curve.comparison;
        write_text_file(report_path, dump(doc));
      }
      return report_exit(curve.report);
    }

    if (*ds) {
      if (mix_min > mix_max) throw UsageError("--mix-min exceeds --mix-max");
      scan.seed = seed;
      scan.purity_mix_range = {mix_min, mix_max};
      scan.convention = parse_conventions(scan_conv).front();
      const json config = {{"command", "delta-scan"},   {"dim", scan.dim},
                           {"trials", scan.trials},     {"mix_min", mix_min},
                           {"mix_max", mix_max},        {"convention", scan_conv},
                           {"common_eigenbasis", scan.common_eigenbasis},
                           {"top", top},                {"seed", seed},
                           {"min_violation", min_violation ? json(*min_violation) : json(nullptr)}};
      echo_config("delta-scan", config);
      DeltaScanResult result = delta_scan(scan);
      const double largest = result.records.empty() ? 0.0 : std::abs(result.records.front().delta);
      if (top > 0 && result.records.size() > top) result.records.resize(top);
      emit(out, violation_records_csv(result.records));

      AxiomReport report("delta-scan");
      report.seed = seed;
      report.config = config;
      report.instances = scan.trials;
      if (min_violation) {
        // Residual is how far the largest |Δ| falls short of the threshold.
        report.record("violation_found", "max |Δ| > threshold", 0.0,
                      largest > *min_violation ? 0.0 : *min_violation - largest + 1e-300);
      }
      if (!report_path.empty()) {
        json doc = report.to_json();
        doc["max_abs_delta"] = largest;
        doc["records"] = result.records.size();
        doc["rejected_commuting"] = result.rejected_commuting;
        doc["rejected_null"] = result.rejected_null;
        write_text_file(report_path, dump(doc));
      }
      return report_exit(report);
    }

    if (*mc) {
      const OperatorSet set = OperatorSet::from_json(read_json_file(ops.path));
      const DensityMatrix rho{ComplexMatrix(set.get(ops.rho))};
      const Projector p{ComplexMatrix(set.get(ops.p))};
      const json config = {{"command", "mc-oracle"}, {"in", ops.path},     {"rho", ops.rho},
                           {"p", ops.p},             {"q", mc_unconditioned ? json(nullptr) : json(ops.q)},
                           {"trials", mc_trials},    {"seed", seed}};
      echo_config("mc-oracle", config);
      AxiomReport report("mc-oracle");
      report.seed = seed;
      report.config = config;
      report.instances = 1;
      json doc = {{"config", config}};
      try {
        MeasurementRun run;
        double exact = 0.0;
        if (mc_unconditioned) {
          run = sample_proposition(rho, p, mc_trials, seed);
          exact = born(rho, p);
        } else {
          const Projector q{ComplexMatrix(set.get(ops.q))};
          run = sample_sequential(rho, q, p, mc_trials, seed);
          const double acc_err = run.acceptance_stderr();
          report.record("acceptance_agreement", "|N_Q/N - tr(ρQ)|/σ ≤ 5", 5.0,
                        z_score(run.acceptance(), born(rho, q), acc_err));
          exact = lueders(rho, p, q).value;
          doc["acceptance"] = run.acceptance();
          doc["acceptance_stderr"] = acc_err;
        }
        report.record("estimate_agreement", "|N_H/N - Pr|/σ ≤ 5", 5.0, z_score(run.estimate, exact, run.stderr_));
        doc["run"] = run.to_json();
        doc["exact"] = exact;
      } catch (const ConditioningOnNull& e) {
        doc["error"] = e.what();
        report.record("estimate_agreement", "|N_H/N - Pr|/σ ≤ 5", 5.0, std::numeric_limits<double>::quiet_NaN());
      } catch (const OracleStarvation& e) {
        doc["error"] = e.what();
        report.record("estimate_agreement", "|N_H/N - Pr|/σ ≤ 5", 5.0, std::numeric_limits<double>::quiet_NaN());
      }
      doc["report"] = report.to_json();
      emit(out, dump(doc));
      return report_exit(report);
    }
  } catch (const UsageError& e) {
    std::cerr << "qinfer: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "qinfer: input error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "qinfer: precondition failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "qinfer: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
