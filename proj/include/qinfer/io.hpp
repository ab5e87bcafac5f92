#pragma once

// JSON and CSV encodings shared by the library and the CLI.
//
// Matrices are {"re": [[...]], "im": [[...]]}, row-major. Operator files are
// {"dim": d, "matrices": [{"label": ..., "re": ..., "im": ...}, ...]}.
// Doubles are written in shortest round-trip form, so decoding is bit-exact.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qinfer/linalg.hpp"

namespace qinfer {

nlohmann::json matrix_to_json(const MatrixXc& m);
MatrixXc matrix_from_json(const nlohmann::json& j);

struct LabeledMatrix {
  std::string label;
  MatrixXc matrix;
};

struct OperatorSet {
  int dim = 0;
  std::vector<LabeledMatrix> matrices;

  const MatrixXc& get(const std::string& label) const;
  nlohmann::json to_json() const;
  static OperatorSet from_json(const nlohmann::json& j);
};

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// printf-style %.17g, the CSV number format.
std::string format_g17(double x);

}  // namespace qinfer
