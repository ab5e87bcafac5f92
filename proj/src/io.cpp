#include "qinfer/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace qinfer {

nlohmann::json matrix_to_json(const MatrixXc& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json irow = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

MatrixXc matrix_from_json_unchecked(const nlohmann::json& j) {
  if (!j.contains("re")) throw InputError("matrix JSON lacks 're'");
  const auto& re = j.at("re");
  const nlohmann::json* im = j.contains("im") ? &j.at("im") : nullptr;
  const std::size_t rows = re.size();
  if (rows == 0) throw InputError("matrix JSON has no rows");
  const std::size_t cols = re.at(0).size();
  if (im && im->size() != rows) throw InputError("matrix JSON re/im shapes differ");
  MatrixXc m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& rrow = re.at(i);
    if (rrow.size() != cols) throw InputError("matrix JSON rows are ragged");
    if (im && im->at(i).size() != cols) throw InputError("matrix JSON re/im shapes differ");
    for (std::size_t k = 0; k < cols; ++k) {
      const double imag = im ? im->at(i).at(k).get<double>() : 0.0;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = Complex(rrow.at(k).get<double>(), imag);
    }
  }
  return m;
}

}  // namespace

MatrixXc matrix_from_json(const nlohmann::json& j) {
  try {
    return matrix_from_json_unchecked(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("malformed matrix JSON: {}", e.what()));
  }
}

const MatrixXc& OperatorSet::get(const std::string& label) const {
  for (const auto& lm : matrices) {
    if (lm.label == label) return lm.matrix;
  }
  throw InputError(fmt::format("no operator labelled '{}'", label));
}

nlohmann::json OperatorSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& lm : matrices) {
    nlohmann::json e = matrix_to_json(lm.matrix);
    e["label"] = lm.label;
    arr.push_back(std::move(e));
  }
  return {{"dim", dim}, {"matrices", std::move(arr)}};
}

OperatorSet OperatorSet::from_json(const nlohmann::json& j) try {
  OperatorSet set;
  set.dim = j.at("dim").get<int>();
  if (set.dim < 1) throw InputError("operator set dimension must be positive");
  for (const auto& e : j.at("matrices")) {
    LabeledMatrix lm{e.value("label", std::string{}), matrix_from_json(e)};
    if (lm.matrix.rows() != set.dim || lm.matrix.cols() != set.dim) {
      throw InputError(fmt::format("operator '{}' is not {}x{}", lm.label, set.dim, set.dim));
    }
    set.matrices.push_back(std::move(lm));
  }
  return set;
} catch (const nlohmann::json::exception& e) {
  throw InputError(fmt::format("malformed operator set JSON: {}", e.what()));
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

std::string format_g17(double x) {
  return fmt::format("{:.17g}", x);
}

}  // namespace qinfer
