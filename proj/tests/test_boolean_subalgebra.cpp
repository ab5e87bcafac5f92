#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qinfer/boolean_subalgebra.hpp"
#include "qinfer/io.hpp"
#include "qinfer/lattice.hpp"

using namespace qinfer;

namespace {

Projector diag_p(std::vector<double> d) { return Projector(oracle::to_eigen(oracle::diag(std::move(d)))); }

bool contains_matrix(const std::vector<Projector>& atoms, const oracle::Mat& m, double tol = 1e-12) {
  for (const auto& a : atoms) {
    if (oracle::max_diff(a.eigen(), m) <= tol) return true;
  }
  return false;
}

// Atoms by brute force: every sign-pattern product, zero ones dropped.
std::vector<oracle::Mat> sign_pattern_atoms(const std::vector<oracle::Mat>& gens, int dim) {
  std::vector<oracle::Mat> out;
  const std::size_t n = gens.size();
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
    oracle::Mat prod = oracle::eye(dim);
    for (std::size_t i = 0; i < n; ++i) {
      const oracle::Mat factor = (s >> i & 1U) ? gens[i] : oracle::add(oracle::eye(dim), gens[i], -1.0);
      prod = oracle::mul(prod, factor);
    }
    if (oracle::trace(prod).real() > 0.5) out.push_back(prod);
  }
  return out;
}

std::vector<Projector> commuting_generators(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const MatrixXc u = random_unitary(dim, rng());
  std::vector<Projector> gens;
  for (int k = 0; k < count; ++k) {
    MatrixXc m = MatrixXc::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (rng() & 1U) m += u.col(i) * u.col(i).adjoint();
    }
    gens.emplace_back(m);
  }
  return gens;
}

}  // namespace

TEST(CommonAtoms, SingleGenerator) {
  const std::vector<Projector> gens{diag_p({1, 1, 0, 0})};
  const auto atoms = common_atoms(gens, 4);
  ASSERT_EQ(atoms.size(), 2U);
  EXPECT_TRUE(contains_matrix(atoms, oracle::diag({1, 1, 0, 0})));
  EXPECT_TRUE(contains_matrix(atoms, oracle::diag({0, 0, 1, 1})));
}

TEST(CommonAtoms, EmptyGeneratorSet) {
  const auto atoms = common_atoms({}, 3);
  ASSERT_EQ(atoms.size(), 1U);
  EXPECT_LE(oracle::max_diff(atoms[0].eigen(), oracle::eye(3)), 0.0);
}

TEST(CommonAtoms, NestedDiagonalsGiveThreeAtoms) {
  const std::vector<Projector> gens{diag_p({1, 1, 0}), diag_p({1, 0, 0})};
  const auto atoms = common_atoms(gens, 3);
  ASSERT_EQ(atoms.size(), 3U);
  for (const auto& d : {oracle::diag({1, 0, 0}), oracle::diag({0, 1, 0}), oracle::diag({0, 0, 1})}) {
    EXPECT_TRUE(contains_matrix(atoms, d));
  }
}

TEST(CommonAtoms, NonCommutingPairIsRejected) {
  const auto f = oracle::two_qubit(0.0);
  const std::vector<Projector> gens{Projector(oracle::to_eigen(f.q)), Projector(oracle::to_eigen(f.r))};
  try {
    common_atoms(gens, 4);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("0"), std::string::npos);
    EXPECT_NE(msg.find("1"), std::string::npos);
  }
}

TEST(CommonAtoms, MatchesSignPatternEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 3 + static_cast<int>(seed % 4);
    const auto gens = commuting_generators(d, 3, seed);
    std::vector<oracle::Mat> plain;
    for (const auto& g : gens) plain.push_back(oracle::from_eigen(g.eigen()));
    const auto expected = sign_pattern_atoms(plain, d);
    const auto atoms = common_atoms(gens, d);
    ASSERT_EQ(atoms.size(), expected.size());
    for (const auto& e : expected) EXPECT_TRUE(contains_matrix(atoms, e, 1e-10));
  }
}

TEST(CommonAtoms, CanonicalOrder) {
  const std::vector<Projector> gens{diag_p({0, 1, 1, 0, 0}), diag_p({0, 0, 1, 1, 1})};
  const auto atoms = common_atoms(gens, 5);
  // Ranks 2 ({3,4}), then rank-1 atoms by descending diagonal: e0, e1, e2.
  ASSERT_EQ(atoms.size(), 4U);
  EXPECT_LE(oracle::max_diff(atoms[0].eigen(), oracle::diag({0, 0, 0, 1, 1})), 1e-12);
  EXPECT_LE(oracle::max_diff(atoms[1].eigen(), oracle::diag({1, 0, 0, 0, 0})), 1e-12);
  EXPECT_LE(oracle::max_diff(atoms[2].eigen(), oracle::diag({0, 1, 0, 0, 0})), 1e-12);
  EXPECT_LE(oracle::max_diff(atoms[3].eigen(), oracle::diag({0, 0, 1, 0, 0})), 1e-12);
}

TEST(BooleanClosure, SingleProjectorGivesFourElements) {
  const Projector p = random_projector(3, 1, 17);
  const std::vector<Projector> gens{p};
  const auto c = boolean_closure(gens, 3, {"P"});
  EXPECT_EQ(c.atom_count(), 2);
  EXPECT_EQ(c.element_count(), 4U);
  // {0, P, ¬P, 1} as subset-sums.
  std::vector<MatrixXc> expected{MatrixXc::Zero(3, 3), p.eigen(), complement(p).eigen(), MatrixXc::Identity(3, 3)};
  for (const auto& e : expected) {
    bool found = false;
    for (ElementMask m = 0; m <= c.full_mask(); ++m) found = found || max_abs(c.element_matrix(m) - e) <= 1e-10;
    EXPECT_TRUE(found);
  }
}

TEST(BooleanClosure, ZeroGenerator) {
  const std::vector<Projector> gens{Projector::zero(3)};
  const auto c = boolean_closure(gens, 3);
  EXPECT_EQ(c.atom_count(), 1);
  EXPECT_EQ(c.element_count(), 2U);
}

TEST(BooleanClosure, CommutingTwoQubitPair) {
  const auto f = oracle::two_qubit(0.0);
  const std::vector<Projector> gens{Projector(oracle::to_eigen(f.p)), Projector(oracle::to_eigen(f.q))};
  const auto c = boolean_closure(gens, 4, {"P", "Q"});
  EXPECT_EQ(c.atom_count(), 4);
  EXPECT_EQ(c.element_count(), 16U);
  for (const auto& e : sign_pattern_atoms({f.p, f.q}, 4)) EXPECT_TRUE(contains_matrix(c.atoms(), e));
  const AxiomReport r = verify_boolean_identities(c, 1e-11);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.find("associativity_meet")->evaluated, 16U * 16U * 16U);
}

TEST(BooleanClosure, Invariants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 2 + static_cast<int>(seed % 6);
    const auto gens = commuting_generators(d, 1 + static_cast<int>(seed % 4), seed + 40);
    const auto c = boolean_closure(gens, d);
    EXPECT_LE(c.atom_count(), d);
    EXPECT_EQ(c.element_count(), std::uint64_t{1} << c.atom_count());
    // Each generator is the subset-sum of the atoms inside its range.
    for (const auto& g : gens) {
      const auto mask = c.mask_of(g);
      ASSERT_TRUE(mask.has_value());
      EXPECT_LE(max_abs(c.element_matrix(*mask) - g.eigen()), 1e-10);
    }
    // Closure of the atoms reproduces the atoms.
    const auto again = boolean_closure(c.atoms(), d);
    ASSERT_EQ(again.atom_count(), c.atom_count());
    for (const auto& a : c.atoms()) EXPECT_TRUE(contains_matrix(again.atoms(), oracle::from_eigen(a.eigen()), 1e-10));
  }
}

TEST(BooleanClosure, MaskOfForeignProjector) {
  const std::vector<Projector> gens{diag_p({1, 0, 0})};
  const auto c = boolean_closure(gens, 3);
  EXPECT_FALSE(c.mask_of(diag_p({0, 1, 0})).has_value());
  EXPECT_FALSE(c.mask_of(Projector::identity(2)).has_value());
}

TEST(BooleanSubalgebra, ConstructorRejectsBadAtoms) {
  EXPECT_THROW(BooleanSubalgebra(2, {}), InputError);
  EXPECT_THROW(BooleanSubalgebra(2, {diag_p({1, 0}), diag_p({1, 0})}), InputError);
  EXPECT_THROW(BooleanSubalgebra(3, {diag_p({1, 0, 0}), diag_p({0, 1, 0})}), InputError);
  EXPECT_THROW(BooleanSubalgebra(2, {diag_p({1, 0}), diag_p({0, 1}), Projector::zero(2)}), InputError);
  EXPECT_NO_THROW(BooleanSubalgebra(2, {diag_p({1, 0}), diag_p({0, 1})}));
}

TEST(VerifyIdentities, FourElementAlgebra) {
  const std::vector<Projector> gens{diag_p({1, 1, 0})};
  const AxiomReport r = verify_boolean_identities(boolean_closure(gens, 3), 1e-12);
  EXPECT_TRUE(r.pass());
  for (const auto& c : r.checks()) EXPECT_LE(c.max_residual, 1e-12) << c.id;
}

TEST(VerifyIdentities, CorruptedAtomsAreFlagged) {
  const int d = 4;
  const auto f = oracle::two_qubit(0.0);
  const std::vector<Projector> gens{Projector(oracle::to_eigen(f.p)), Projector(oracle::to_eigen(f.q))};
  const auto clean = boolean_closure(gens, d);
  std::vector<Projector> noisy;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1e-3);
  for (const auto& a : clean.atoms()) {
    MatrixXc n(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) n(i, j) = Complex(g(rng), g(rng));
    noisy.emplace_back(MatrixXc(a.eigen() + (n + n.adjoint()) / 2.0), 1e-2);
  }
  const BooleanSubalgebra corrupted(d, noisy, {}, 1e-2);
  const AxiomReport r = verify_boolean_identities(corrupted, 1e-11);
  EXPECT_FALSE(r.pass());
  EXPECT_GT(r.find("duality_meet")->max_residual, 1e-11);
  EXPECT_GT(r.find("atoms_idempotent")->max_residual, 1e-5);
}

TEST(VerifyIdentities, SampledForLargeAlgebras) {
  // 7 atoms, 128 elements: sampled triples.
  std::vector<double> ones(7, 0.0);
  std::vector<Projector> atoms;
  for (int i = 0; i < 7; ++i) {
    std::vector<double> d(7, 0.0);
    d[static_cast<std::size_t>(i)] = 1.0;
    atoms.push_back(diag_p(d));
  }
  const BooleanSubalgebra c(7, atoms);
  const AxiomReport r = verify_boolean_identities(c, 1e-12, 500, 9);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.find("associativity_meet")->evaluated, 500U);
  const AxiomReport r2 = verify_boolean_identities(c, 1e-12, 500, 9);
  EXPECT_EQ(r.to_json(), r2.to_json());
}

TEST(BooleanSubalgebraJson, BitExactRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto gens = commuting_generators(5, 3, seed + 900);
    const auto c = boolean_closure(gens, 5, {"A", "B", "C"});
    const nlohmann::json j = c.to_json();
    const auto back = BooleanSubalgebra::from_json(nlohmann::json::parse(j.dump()));
    ASSERT_EQ(back.atom_count(), c.atom_count());
    EXPECT_EQ(back.generator_labels(), c.generator_labels());
    for (int k = 0; k < c.atom_count(); ++k) {
      EXPECT_EQ(back.atoms()[static_cast<std::size_t>(k)].eigen(), c.atoms()[static_cast<std::size_t>(k)].eigen());
    }
  }
}
