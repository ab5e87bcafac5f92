#include "qinfer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace qinfer {

void ToleranceProfile::validate() const {
  if (!(validation_tol > 0) || !(eigen_gap_tol > 0) || !(probability_tol > 0)) {
    throw InputError("tolerances must be strictly positive");
  }
  if (!(eigen_gap_tol < 0.5)) {
    throw InputError("eigen_gap_tol must be below 0.5");
  }
}

const ToleranceProfile& default_tolerances() {
  static const ToleranceProfile profile{};
  return profile;
}

ComplexMatrix::ComplexMatrix(MatrixXc m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw InputError(fmt::format("matrix must be square with dim >= 1, got {}x{}", m_.rows(), m_.cols()));
  }
  if (!m_.allFinite()) {
    throw InputError("matrix has non-finite entries");
  }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  return ComplexMatrix(MatrixXc::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::zero(int dim) {
  return ComplexMatrix(MatrixXc::Zero(dim, dim));
}

double max_abs(const MatrixXc& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const MatrixXc& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Projector::Projector(const ComplexMatrix& m, double tol) : matrix_(m), tol_(tol) {
  if (!(tol >= 0)) throw InputError("projector tolerance must be non-negative");
  const MatrixXc& a = m.eigen();
  if (double herm = max_abs(a - a.adjoint()); herm > tol) {
    throw InputError(fmt::format("projector is not Hermitian (residual {:.3e})", herm));
  }
  if (double idem = max_abs(a * a - a); idem > tol) {
    throw InputError(fmt::format("projector is not idempotent (residual {:.3e})", idem));
  }
  const double gap = std::max(tol, default_tolerances().eigen_gap_tol);
  const Eigen::VectorXd ev = hermitian_eigenvalues(a);
  for (double lambda : ev) {
    if (std::abs(lambda - 1.0) <= gap) {
      ++rank_;
    } else if (std::abs(lambda) > gap) {
      throw InputError(fmt::format("projector eigenvalue {} is neither 0 nor 1", lambda));
    }
  }
}

Projector::Projector(MatrixXc m, int rank, double tol, Trusted)
    : matrix_(std::move(m)), rank_(rank), tol_(tol) {}

Projector Projector::identity(int dim) {
  return Projector(MatrixXc::Identity(dim, dim), dim, default_tolerances().validation_tol, Trusted{});
}

Projector Projector::zero(int dim) {
  return Projector(MatrixXc::Zero(dim, dim), 0, default_tolerances().validation_tol, Trusted{});
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol) : matrix_(m), tol_(tol) {
  const MatrixXc& a = m.eigen();
  if (double herm = max_abs(a - a.adjoint()); herm > tol) {
    throw InputError(fmt::format("density matrix is not Hermitian (residual {:.3e})", herm));
  }
  if (double tr = std::abs(a.trace() - Complex(1.0)); tr > tol) {
    throw InputError(fmt::format("density matrix trace deviates from 1 by {:.3e}", tr));
  }
  if (double lo = hermitian_eigenvalues(a).minCoeff(); lo < -tol) {
    throw InputError(fmt::format("density matrix has negative eigenvalue {:.3e}", lo));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(MatrixXc(MatrixXc::Identity(dim, dim) / static_cast<double>(dim)));
}

Projector projector_from_basis(std::span<const VectorXc> vectors, int dim, const ToleranceProfile& tol) {
  if (dim < 1) throw InputError("projector dimension must be positive");
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw InputError(fmt::format("basis vector has dimension {}, expected {}", v.size(), dim));
    }
  }
  if (vectors.empty()) return Projector::zero(dim);

  MatrixXc stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) stacked.col(static_cast<Eigen::Index>(k)) = vectors[k];

  // The singular-value cut is scale-sensitive: normalize each column, and
  // zero out columns that are themselves below the cut.
  for (Eigen::Index k = 0; k < stacked.cols(); ++k) {
    double n = stacked.col(k).norm();
    if (n > tol.eigen_gap_tol) {
      stacked.col(k) /= n;
    } else {
      stacked.col(k).setZero();
    }
  }

  Eigen::JacobiSVD<MatrixXc> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol.eigen_gap_tol) ++rank;
  if (rank == 0) return Projector::zero(dim);

  const MatrixXc u = svd.matrixU().leftCols(rank);
  return Projector(MatrixXc(u * u.adjoint()), tol.validation_tol);
}

Projector spectral_projector(const MatrixXc& h, double target, double gap, double tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  const auto& ev = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - target) <= gap) keep.push_back(i);
  }
  const auto dim = static_cast<int>(h.rows());
  if (keep.empty()) return Projector::zero(dim);
  MatrixXc u(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    u.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  }
  return Projector(MatrixXc(u * u.adjoint()), tol);
}

Complex trace_inner(const MatrixXc& a, const MatrixXc& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(fmt::format("trace_inner dimension mismatch: {} vs {}", a.rows(), b.rows()));
  }
  // tr(AB) = sum_ij A_ij B_ji without forming the product.
  return (a.cwiseProduct(b.transpose())).sum();
}

Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return trace_inner(a.eigen(), b.eigen());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

namespace {

MatrixXc complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXc g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

MatrixXc random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw InputError("unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  const MatrixXc g = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<MatrixXc> qr(g);
  MatrixXc q = qr.householderQ() * MatrixXc::Identity(dim, dim);
  const MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

VectorXc random_unit_vector(int dim, std::uint64_t seed) {
  if (dim < 1) throw InputError("vector dimension must be positive");
  std::mt19937_64 rng(seed);
  VectorXc v = complex_gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

Projector random_projector(int dim, int rank, std::uint64_t seed) {
  if (rank < 0 || rank > dim) throw InputError(fmt::format("rank {} outside [0, {}]", rank, dim));
  if (rank == 0) return Projector::zero(dim);
  const MatrixXc u = random_unitary(dim, seed).leftCols(rank);
  return Projector(MatrixXc(u * u.adjoint()));
}

DensityMatrix random_state(int dim, double purity_mix, std::uint64_t seed, int max_dim) {
  if (dim < 2 || dim > max_dim) {
    throw InputError(fmt::format("random_state dimension {} outside [2, {}]", dim, max_dim));
  }
  if (!(purity_mix >= 0.0 && purity_mix <= 1.0)) {
    throw InputError(fmt::format("purity_mix {} outside [0, 1]", purity_mix));
  }
  const VectorXc psi = random_unit_vector(dim, seed);
  MatrixXc rho = (purity_mix / dim) * MatrixXc::Identity(dim, dim);
  rho += (1.0 - purity_mix) * (psi * psi.adjoint());
  return DensityMatrix(rho);
}

}  // namespace qinfer
