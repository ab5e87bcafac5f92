#include "qinfer/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qinfer {

CheckRecord& AxiomReport::check(const std::string& id, const std::string& anchor, double tolerance) {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const CheckRecord& c) { return c.id == id; });
  if (it != checks_.end()) return *it;
  checks_.push_back(CheckRecord{id, anchor, 0.0, tolerance, 0, 0});
  return checks_.back();
}

void AxiomReport::record(const std::string& id, const std::string& anchor, double tolerance, double residual) {
  CheckRecord& c = check(id, anchor, tolerance);
  if (std::isnan(residual) || residual > c.max_residual) c.max_residual = residual;
  ++c.evaluated;
}

void AxiomReport::skip(const std::string& id, const std::string& anchor, double tolerance, std::uint64_t n) {
  check(id, anchor, tolerance).skipped += n;
}

void AxiomReport::merge(const AxiomReport& other) {
  for (const auto& oc : other.checks_) {
    CheckRecord& c = check(oc.id, oc.anchor, oc.tolerance);
    if (std::isnan(oc.max_residual) || oc.max_residual > c.max_residual) c.max_residual = oc.max_residual;
    c.evaluated += oc.evaluated;
    c.skipped += oc.skipped;
  }
  instances += other.instances;
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  skipped_notes.insert(skipped_notes.end(), other.skipped_notes.begin(), other.skipped_notes.end());
}

const CheckRecord* AxiomReport::find(const std::string& id) const {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const CheckRecord& c) { return c.id == id; });
  return it == checks_.end() ? nullptr : &*it;
}

bool AxiomReport::pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return c.pass(); });
}

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite_;
  j["instances"] = instances;
  j["seed"] = seed;
  j["config"] = config;
  j["pass"] = pass();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) {
    arr.push_back({{"id", c.id},
                   {"anchor", c.anchor},
                   {"max_residual", c.max_residual},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass()},
                   {"evaluated", c.evaluated},
                   {"skipped", c.skipped}});
  }
  j["warnings"] = warnings;
  j["skipped_notes"] = skipped_notes;
  return j;
}

AxiomReport AxiomReport::from_json(const nlohmann::json& j) {
  AxiomReport r(j.at("suite").get<std::string>());
  r.instances = j.value("instances", std::uint64_t{0});
  r.seed = j.value("seed", std::uint64_t{0});
  r.config = j.value("config", nlohmann::json::object());
  r.warnings = j.value("warnings", std::vector<std::string>{});
  r.skipped_notes = j.value("skipped_notes", std::vector<std::string>{});
  for (const auto& c : j.at("checks")) {
    CheckRecord rec;
    rec.id = c.at("id").get<std::string>();
    rec.anchor = c.at("anchor").get<std::string>();
    rec.max_residual = c.at("max_residual").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                      : c.at("max_residual").get<double>();
    rec.tolerance = c.at("tolerance").get<double>();
    rec.evaluated = c.at("evaluated").get<std::uint64_t>();
    rec.skipped = c.at("skipped").get<std::uint64_t>();
    r.checks_.push_back(rec);
  }
  return r;
}

}  // namespace qinfer
