#pragma once

// Shared verification report: one record per checked identity, carrying the
// worst residual seen, the tolerance it was judged against and the formula
// it checks.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qinfer {

struct CheckRecord {
  std::string id;
  std::string anchor;  // the formula being checked, e.g. "Pr(Q|Q)=1"
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;

  // NaN residuals never pass.
  bool pass() const { return max_residual <= tolerance; }
};

class AxiomReport {
 public:
  AxiomReport() = default;
  explicit AxiomReport(std::string suite) : suite_(std::move(suite)) {}

  // Registers a check (idempotent on id) and returns it for accumulation.
  CheckRecord& check(const std::string& id, const std::string& anchor, double tolerance);

  // Folds one residual into a check, creating it if needed.
  void record(const std::string& id, const std::string& anchor, double tolerance, double residual);
  void skip(const std::string& id, const std::string& anchor, double tolerance, std::uint64_t n = 1);

  // Merges another report's records: maxima of residuals, sums of counts.
  void merge(const AxiomReport& other);

  const std::string& suite() const { return suite_; }
  const std::vector<CheckRecord>& checks() const { return checks_; }
  const CheckRecord* find(const std::string& id) const;

  bool pass() const;

  std::uint64_t instances = 0;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> skipped_notes;

  nlohmann::json to_json() const;
  static AxiomReport from_json(const nlohmann::json& j);

 private:
  std::string suite_;
  std::vector<CheckRecord> checks_;
};

}  // namespace qinfer
