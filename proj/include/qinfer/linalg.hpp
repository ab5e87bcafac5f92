#pragma once

// Dense complex linear algebra primitives and validated operator types.
//
// Every operator in the library lives on C^d with small d (default cap 32).
// ComplexMatrix is a thin strong type over an Eigen dense matrix; Projector
// and DensityMatrix add the invariants that the logic and probability layers
// rely on, checked once at construction and immutable afterwards.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qinfer/errors.hpp"

namespace qinfer {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr int kDefaultMaxDim = 32;

struct ToleranceProfile {
  double validation_tol = 1e-10;
  double eigen_gap_tol = 1e-8;
  double probability_tol = 1e-9;

  // Throws InputError unless every tolerance is strictly positive and
  // eigen_gap_tol < 0.5.
  void validate() const;
};

const ToleranceProfile& default_tolerances();

class ComplexMatrix {
 public:
  explicit ComplexMatrix(MatrixXc m);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const MatrixXc& eigen() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  MatrixXc m_;
};

// Largest absolute entry, the norm used for every residual in the library.
double max_abs(const MatrixXc& m);

class Projector {
 public:
  // Validates Hermiticity and idempotence at `tol`, and classifies every
  // eigenvalue as 0 or 1 at max(tol, eigen_gap_tol).
  explicit Projector(const ComplexMatrix& m, double tol = default_tolerances().validation_tol);
  Projector(const MatrixXc& m, double tol = default_tolerances().validation_tol)
      : Projector(ComplexMatrix(m), tol) {}

  static Projector identity(int dim);
  static Projector zero(int dim);

  int dim() const { return matrix_.dim(); }
  int rank() const { return rank_; }
  double tol() const { return tol_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const MatrixXc& eigen() const { return matrix_.eigen(); }

 private:
  struct Trusted {};
  Projector(MatrixXc m, int rank, double tol, Trusted);

  ComplexMatrix matrix_;
  int rank_ = 0;
  double tol_ = 0.0;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol = default_tolerances().validation_tol);
  DensityMatrix(const MatrixXc& m, double tol = default_tolerances().validation_tol)
      : DensityMatrix(ComplexMatrix(m), tol) {}

  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return matrix_.dim(); }
  double tol() const { return tol_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const MatrixXc& eigen() const { return matrix_.eigen(); }

 private:
  ComplexMatrix matrix_;
  double tol_ = 0.0;
};

// Orthogonal projector onto span(vectors). Dependent inputs are deflated:
// singular values of the stacked vectors below eigen_gap_tol are dropped.
// An empty list needs `dim` to know the space; all-zero input yields zero(dim).
Projector projector_from_basis(std::span<const VectorXc> vectors, int dim,
                               const ToleranceProfile& tol = default_tolerances());

// Projector onto the span of the eigenvectors of Hermitian `h` whose
// eigenvalue satisfies |lambda - target| <= gap. Used for meets and atoms.
Projector spectral_projector(const MatrixXc& h, double target, double gap,
                             double tol = default_tolerances().validation_tol);

Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace_inner(const MatrixXc& a, const MatrixXc& b);

// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const MatrixXc& h);

// Seed mixing (splitmix64 finalizer). Every randomized routine derives its
// streams from (seed, index...) so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Haar-random unitary from the QR factorization of a complex Gaussian matrix.
MatrixXc random_unitary(int dim, std::uint64_t seed);

// Uniformly random unit vector in C^dim.
VectorXc random_unit_vector(int dim, std::uint64_t seed);

// Projector onto the first `rank` columns of a Haar-random unitary.
Projector random_projector(int dim, int rank, std::uint64_t seed);

// (purity_mix/dim)·1 + (1 - purity_mix)·|psi><psi| with |psi> uniform.
DensityMatrix random_state(int dim, double purity_mix, std::uint64_t seed,
                           int max_dim = kDefaultMaxDim);

}  // namespace qinfer
