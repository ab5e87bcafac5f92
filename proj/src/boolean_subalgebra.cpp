#include "qinfer/boolean_subalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "qinfer/io.hpp"
#include "qinfer/lattice.hpp"

namespace qinfer {

BooleanSubalgebra::BooleanSubalgebra(int dim, std::vector<Projector> atoms, std::vector<std::string> generator_labels,
                                     double tol)
    : dim_(dim), atoms_(std::move(atoms)), labels_(std::move(generator_labels)) {
  if (dim_ < 1) throw InputError("subalgebra dimension must be positive");
  if (atoms_.empty()) throw InputError("a Boolean subalgebra needs at least one atom");
  if (atoms_.size() > 63) throw InputError("too many atoms for bitmask elements");
  MatrixXc sum = MatrixXc::Zero(dim_, dim_);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].dim() != dim_) throw InputError("atom dimension mismatch");
    if (atoms_[i].rank() == 0) throw InputError(fmt::format("atom {} is zero", i));
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (double r = max_abs(atoms_[i].eigen() * atoms_[j].eigen()); r > tol) {
        throw InputError(fmt::format("atoms {} and {} are not orthogonal (residual {:.3e})", i, j, r));
      }
    }
    sum += atoms_[i].eigen();
  }
  if (double r = max_abs(sum - MatrixXc::Identity(dim_, dim_)); r > tol) {
    throw InputError(fmt::format("atoms do not sum to the identity (residual {:.3e})", r));
  }
}

MatrixXc BooleanSubalgebra::element_matrix(ElementMask mask) const {
  MatrixXc m = MatrixXc::Zero(dim_, dim_);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (mask >> i & 1U) m += atoms_[i].eigen();
  }
  return m;
}

Projector BooleanSubalgebra::element(ElementMask mask) const {
  if (mask > full_mask()) throw InputError("element mask out of range");
  if (mask == 0) return Projector::zero(dim_);
  return Projector(element_matrix(mask), atoms_.front().tol());
}

std::optional<ElementMask> BooleanSubalgebra::mask_of(const Projector& p, double tol) const {
  if (p.dim() != dim_) return std::nullopt;
  // An atom lies inside P(H) iff tr(A P) = rank(A); otherwise tr(A P) ~ 0.
  ElementMask mask = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double overlap = trace_inner(atoms_[i].eigen(), p.eigen()).real();
    if (overlap > 0.5 * atoms_[i].rank()) mask |= ElementMask{1} << i;
  }
  if (max_abs(element_matrix(mask) - p.eigen()) > tol) return std::nullopt;
  return mask;
}

nlohmann::json BooleanSubalgebra::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    nlohmann::json a = matrix_to_json(atoms_[i].eigen());
    a["label"] = fmt::format("atom{}", i);
    a["rank"] = atoms_[i].rank();
    atoms.push_back(std::move(a));
  }
  return {{"dim", dim_}, {"atoms", std::move(atoms)}, {"generator_labels", labels_}};
}

BooleanSubalgebra BooleanSubalgebra::from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<Projector> atoms;
  for (const auto& a : j.at("atoms")) atoms.emplace_back(matrix_from_json(a));
  return BooleanSubalgebra(dim, std::move(atoms), j.value("generator_labels", std::vector<std::string>{}));
}

namespace {

// Descending rank, then descending lexicographic diagonal.
bool atom_before(const Projector& a, const Projector& b) {
  if (a.rank() != b.rank()) return a.rank() > b.rank();
  for (int i = 0; i < a.dim(); ++i) {
    const double da = a.eigen()(i, i).real();
    const double db = b.eigen()(i, i).real();
    if (std::abs(da - db) > 1e-9) return da > db;
  }
  return false;
}

}  // namespace

std::vector<Projector> common_atoms(std::span<const Projector> generators, int dim, const ToleranceProfile& tol) {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].dim() != dim) {
      throw InputError(fmt::format("generator {} has dimension {}, expected {}", i, generators[i].dim(), dim));
    }
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      const MatrixXc& p = generators[i].eigen();
      const MatrixXc& q = generators[j].eigen();
      if (double c = max_abs(p * q - q * p); c > tol.validation_tol) {
        throw PreconditionError(fmt::format("generators {} and {} do not commute (commutator norm {:.3e})", i, j, c));
      }
    }
  }

  // Refining atom-by-atom produces exactly the nonzero sign-pattern
  // products, and there are never more than `dim` of them.
  std::vector<MatrixXc> current{MatrixXc::Identity(dim, dim)};
  for (const auto& g : generators) {
    const MatrixXc& p = g.eigen();
    const MatrixXc not_p = MatrixXc::Identity(dim, dim) - p;
    std::vector<MatrixXc> next;
    next.reserve(current.size() * 2);
    for (const auto& a : current) {
      for (const MatrixXc* factor : {&p, &not_p}) {
        MatrixXc prod = a * *factor;
        if (prod.trace().real() >= tol.validation_tol) next.push_back(std::move(prod));
      }
    }
    current = std::move(next);
  }

  std::vector<Projector> atoms;
  atoms.reserve(current.size());
  for (const auto& a : current) {
    // Re-project onto the range to shed the commutation slack of the inputs.
    const MatrixXc herm = 0.5 * (a + a.adjoint());
    Projector atom = spectral_projector(herm, 1.0, 0.5, tol.validation_tol);
    if (atom.rank() > 0) atoms.push_back(std::move(atom));
  }
  std::stable_sort(atoms.begin(), atoms.end(), atom_before);
  return atoms;
}

BooleanSubalgebra boolean_closure(std::span<const Projector> generators, int dim, std::vector<std::string> labels,
                                  const ToleranceProfile& tol) {
  return BooleanSubalgebra(dim, common_atoms(generators, dim, tol), std::move(labels), tol.validation_tol);
}

namespace {

struct BoolOps {
  MatrixXc id;
  MatrixXc meet(const MatrixXc& a, const MatrixXc& b) const { return a * b; }
  MatrixXc join(const MatrixXc& a, const MatrixXc& b) const { return a + b - a * b; }
  MatrixXc neg(const MatrixXc& a) const { return id - a; }
};

}  // namespace

AxiomReport verify_boolean_identities(const BooleanSubalgebra& algebra, double tol, std::uint64_t sample_budget,
                                      std::uint64_t seed) {
  AxiomReport report("boolean-identities");
  report.seed = seed;
  const int d = algebra.dim();
  const std::uint64_t n = algebra.element_count();
  const ElementMask full = algebra.full_mask();
  const BoolOps ops{MatrixXc::Identity(d, d)};
  const bool exhaustive = n <= 64;
  report.config = {{"dim", d}, {"atoms", algebra.atom_count()}, {"elements", n}, {"exhaustive", exhaustive},
                   {"sample_budget", sample_budget}, {"tolerance", tol}};

  // Structural checks on the atoms themselves.
  {
    const auto& atoms = algebra.atoms();
    MatrixXc sum = MatrixXc::Zero(d, d);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      sum += atoms[i].eigen();
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        report.record("atoms_orthogonal", "AiAj=0 (i!=j)", tol, max_abs(atoms[i].eigen() * atoms[j].eigen()));
      }
      report.record("atoms_idempotent", "A^2=A", tol, max_abs(atoms[i].eigen() * atoms[i].eigen() - atoms[i].eigen()));
    }
    report.record("atoms_complete", "sum of atoms = 1", tol, max_abs(sum - ops.id));
  }

  std::vector<MatrixXc> cache;
  if (exhaustive) {
    cache.reserve(n);
    for (ElementMask m = 0; m < n; ++m) cache.push_back(algebra.element_matrix(m));
  }
  auto elem = [&](ElementMask m) -> MatrixXc { return exhaustive ? cache[m] : algebra.element_matrix(m); };

  auto residual = [](const MatrixXc& lhs, const MatrixXc& rhs, const MatrixXc& predicted) {
    return std::max(max_abs(lhs - rhs), max_abs(lhs - predicted));
  };

  auto check_triple = [&](ElementMask a, ElementMask b, ElementMask c) {
    const MatrixXc A = elem(a), B = elem(b), C = elem(c);
    const MatrixXc AB = ops.meet(A, B);
    const MatrixXc AvB = ops.join(A, B);

    report.record("associativity_meet", "A∧(B∧C)=(A∧B)∧C", tol,
                  residual(ops.meet(A, ops.meet(B, C)), ops.meet(AB, C), elem(a & b & c)));
    report.record("associativity_join", "A∨(B∨C)=(A∨B)∨C", tol,
                  residual(ops.join(A, ops.join(B, C)), ops.join(AvB, C), elem(a | b | c)));
    report.record("distributivity_meet", "A∧(B∨C)=(A∧B)∨(A∧C)", tol,
                  residual(ops.meet(A, ops.join(B, C)), ops.join(AB, ops.meet(A, C)), elem(a & (b | c))));
    report.record("distributivity_join", "A∨(B∧C)=(A∨B)∧(A∨C)", tol,
                  residual(ops.join(A, ops.meet(B, C)), ops.meet(AvB, ops.join(A, C)), elem(a | (b & c))));
  };

  auto check_pair = [&](ElementMask a, ElementMask b) {
    const MatrixXc A = elem(a), B = elem(b);
    const MatrixXc AB = ops.meet(A, B);
    const MatrixXc AvB = ops.join(A, B);
    report.record("commutativity", "A∧B=B∧A, A∨B=B∨A", tol,
                  std::max(residual(AB, ops.meet(B, A), elem(a & b)), residual(AvB, ops.join(B, A), elem(a | b))));
    report.record("duality_meet", "¬(A∧B)=¬A∨¬B", tol,
                  residual(ops.neg(AB), ops.join(ops.neg(A), ops.neg(B)), elem(full & ~(a & b))));
    report.record("duality_join", "¬(A∨B)=¬A∧¬B", tol,
                  residual(ops.neg(AvB), ops.meet(ops.neg(A), ops.neg(B)), elem(full & ~(a | b))));
  };

  auto check_single = [&](ElementMask a) {
    const MatrixXc A = elem(a);
    report.record("idempotence", "A∧A=A∨A=A", tol,
                  std::max(residual(ops.meet(A, A), A, A), residual(ops.join(A, A), A, A)));
    report.record("complement_closure", "P∈C ⇒ ¬P∈C", tol, max_abs(ops.neg(A) - elem(full & ~a)));
  };

  if (exhaustive) {
    for (ElementMask a = 0; a < n; ++a) {
      check_single(a);
      for (ElementMask b = 0; b < n; ++b) {
        check_pair(a, b);
        for (ElementMask c = 0; c < n; ++c) check_triple(a, b, c);
      }
    }
    report.instances = n * n * n;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<ElementMask> pick(0, full);
    for (std::uint64_t s = 0; s < sample_budget; ++s) {
      const ElementMask a = pick(rng), b = pick(rng), c = pick(rng);
      check_single(a);
      check_pair(a, b);
      check_triple(a, b, c);
    }
    report.instances = sample_budget;
  }
  return report;
}

}  // namespace qinfer
