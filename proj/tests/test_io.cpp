#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "qinfer/io.hpp"
#include "qinfer/report.hpp"

using namespace qinfer;
using nlohmann::json;

TEST(MatrixJson, BitExactRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MatrixXc m = random_unitary(5, seed) * Complex(1.0 / 3.0, std::sqrt(2.0));
    const MatrixXc back = matrix_from_json(json::parse(matrix_to_json(m).dump()));
    EXPECT_EQ(back, m);
  }
}

TEST(MatrixJson, ImaginaryPartOptional) {
  const MatrixXc m = matrix_from_json(json{{"re", {{1.0, 0.0}, {0.0, 1.0}}}});
  EXPECT_EQ(m, MatrixXc::Identity(2, 2));
}

TEST(MatrixJson, MalformedInputRejected) {
  EXPECT_THROW(matrix_from_json(json{{"re", {{1.0, 0.0}, {0.0}}}}), InputError);
  EXPECT_THROW(matrix_from_json(json{{"re", {{1.0}}}, {"im", {{1.0, 0.0}}}}), InputError);
  EXPECT_THROW(matrix_from_json(json{{"im", {{1.0}}}}), InputError);
  EXPECT_THROW(matrix_from_json(json{{"re", {{"x"}}}}), InputError);
}

TEST(OperatorSet, LookupAndRoundTrip) {
  OperatorSet set;
  set.dim = 2;
  set.matrices.push_back({"rho", MatrixXc::Identity(2, 2) / 2.0});
  set.matrices.push_back({"P", random_projector(2, 1, 3).eigen()});
  const OperatorSet back = OperatorSet::from_json(json::parse(set.to_json().dump()));
  EXPECT_EQ(back.get("P"), set.get("P"));
  EXPECT_EQ(back.get("rho"), set.get("rho"));
  EXPECT_THROW(back.get("Q"), InputError);
}

TEST(OperatorSet, DimensionChecked) {
  const json j = {{"dim", 3}, {"matrices", {{{"label", "P"}, {"re", {{1.0, 0.0}, {0.0, 0.0}}}}}}};
  EXPECT_THROW(OperatorSet::from_json(j), InputError);
}

TEST(Files, ReadWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "qinfer_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / "doc.json";
  write_text_file(path, "{\"a\": 1}\n");
  EXPECT_EQ(read_json_file(path).at("a"), 1);
  EXPECT_THROW(read_json_file(dir / "missing.json"), InputError);
  write_text_file(path, "{not json");
  EXPECT_THROW(read_json_file(path), InputError);
  std::filesystem::remove_all(dir);
}

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_g17(1.0), "1");
  EXPECT_EQ(format_g17(-0.20710678118654757), "-0.20710678118654757");
  EXPECT_EQ(format_g17(1e-20), "9.9999999999999995e-21");
  for (double x : {1.0 / 3.0, std::sqrt(2.0), 1e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_g17(x)), x);
}

TEST(AxiomReport, PassIffResidualWithinTolerance) {
  AxiomReport r("demo");
  r.record("a", "x=x", 1e-12, 5e-13);
  EXPECT_TRUE(r.pass());
  r.record("a", "x=x", 1e-12, 2e-12);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.find("a")->evaluated, 2U);
  EXPECT_EQ(r.find("a")->max_residual, 2e-12);
}

TEST(AxiomReport, NanNeverPasses) {
  AxiomReport r("demo");
  r.record("a", "x=x", 1.0, 0.0);
  r.record("a", "x=x", 1.0, std::numeric_limits<double>::quiet_NaN());
  r.record("a", "x=x", 1.0, 0.5);
  EXPECT_FALSE(r.pass());
  EXPECT_TRUE(std::isnan(r.find("a")->max_residual));
}

TEST(AxiomReport, SkipsAreNotPasses) {
  AxiomReport r("demo");
  r.skip("a", "x=x", 1.0, 3);
  EXPECT_EQ(r.find("a")->evaluated, 0U);
  EXPECT_EQ(r.find("a")->skipped, 3U);
}

TEST(AxiomReport, MergeTakesMaximaAndSums) {
  AxiomReport a("x"), b("y");
  a.record("c", "anchor", 1.0, 0.1);
  b.record("c", "anchor", 1.0, 0.3);
  b.skip("c", "anchor", 1.0);
  b.record("d", "other", 1.0, 0.0);
  b.warnings.push_back("w");
  a.merge(b);
  EXPECT_EQ(a.find("c")->max_residual, 0.3);
  EXPECT_EQ(a.find("c")->evaluated, 2U);
  EXPECT_EQ(a.find("c")->skipped, 1U);
  EXPECT_NE(a.find("d"), nullptr);
  EXPECT_EQ(a.warnings.size(), 1U);
}

TEST(AxiomReport, JsonRoundTrip) {
  AxiomReport r("suite");
  r.seed = 42;
  r.instances = 7;
  r.config = {{"k", 1}};
  r.record("one", "Pr(Q|Q)=1", 1e-12, 1.0 / 3.0 * 1e-13);
  r.skip("two", "Pr(P|R)", 1e-12);
  r.warnings.push_back("warn");
  r.skipped_notes.push_back("note");
  const json j = r.to_json();
  EXPECT_EQ(j.at("pass"), true);
  EXPECT_EQ(j.at("checks")[0].at("pass"), true);
  const AxiomReport back = AxiomReport::from_json(json::parse(j.dump()));
  EXPECT_EQ(back.to_json(), j);
  EXPECT_EQ(back.find("one")->max_residual, r.find("one")->max_residual);
}

TEST(OperatorSet, MalformedInputRejected) {
  EXPECT_THROW(OperatorSet::from_json(json{{"matrices", json::array()}}), InputError);
  EXPECT_THROW(OperatorSet::from_json(json{{"dim", "two"}, {"matrices", json::array()}}), InputError);
  EXPECT_THROW(OperatorSet::from_json(json{{"dim", 2}}), InputError);
}
