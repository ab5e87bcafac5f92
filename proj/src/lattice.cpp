#include "qinfer/lattice.hpp"

#include <fmt/format.h>

namespace qinfer {

namespace {

void require_same_dim(const Projector& p, const Projector& q, const char* op) {
  if (p.dim() != q.dim()) {
    throw InputError(fmt::format("{}: dimension mismatch {} vs {}", op, p.dim(), q.dim()));
  }
}

double commutator_norm(const Projector& p, const Projector& q) {
  return max_abs(p.eigen() * q.eigen() - q.eigen() * p.eigen());
}

}  // namespace

Projector complement(const Projector& p) {
  const int d = p.dim();
  return Projector(MatrixXc(MatrixXc::Identity(d, d) - p.eigen()), p.tol());
}

Projector meet(const Projector& p, const Projector& q, const ToleranceProfile& tol) {
  require_same_dim(p, q, "meet");
  const MatrixXc sum = p.eigen() + q.eigen();
  // Symmetrize so the eigensolver sees an exactly Hermitian input.
  const MatrixXc herm = 0.5 * (sum + sum.adjoint());
  return spectral_projector(herm, 2.0, tol.eigen_gap_tol, tol.validation_tol);
}

Projector join(const Projector& p, const Projector& q, const ToleranceProfile& tol) {
  require_same_dim(p, q, "join");
  return complement(meet(complement(p), complement(q), tol));
}

bool commutes(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q, "commutes");
  return commutator_norm(p, q) <= tol;
}

bool less_equal(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q, "less_equal");
  return max_abs(q.eigen() * p.eigen() - p.eigen()) <= tol;
}

bool orthogonal(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q, "orthogonal");
  return max_abs(p.eigen() * q.eigen()) <= tol;
}

ProjectorPairClassification classify_pair(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q, "classify_pair");
  ProjectorPairClassification c;
  const double comm = commutator_norm(p, q);
  const double order = max_abs(q.eigen() * p.eigen() - p.eigen());
  const double orth = max_abs(p.eigen() * q.eigen());
  c.residual_norms = {{"commutator", comm}, {"order", order}, {"product", orth}};
  c.commuting = comm <= tol;
  // QP = P forces PQ = P by taking adjoints, so both relations imply
  // commutation up to tolerance; keep the flags consistent with that.
  c.ordered_le = order <= tol && c.commuting;
  c.orthogonal = orth <= tol && c.commuting;
  return c;
}

}  // namespace qinfer
