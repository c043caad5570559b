#pragma once

// Dense complex linear algebra: Jacobi eigensolver, one-sided Jacobi SVD,
// functional calculus on PSD matrices, polar parts, spectral projections and
// Haar-random unitaries.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

#include "nck/error.hpp"

namespace nck {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default relative tolerances.
struct Tol {
  static constexpr double eig = 1e-12;
  static constexpr double svd = 1e-12;
  static constexpr double herm = 1e-10;
  static constexpr double psd = 1e-10;
  static constexpr double rank = 1e-10;
};

struct HermEig {
  RealVector eigenvalues;  // nonincreasing
  Matrix basis;            // columns are eigenvectors
};

struct Svd {
  Matrix left;           // rows x k, orthonormal columns
  RealVector singulars;  // k = min(rows, cols), nonincreasing
  Matrix right;          // cols x k, orthonormal columns
};

struct PolarParts {
  Matrix isometry;  // partial isometry, a = isometry * modulus
  Matrix modulus;   // |a| = (a* a)^{1/2}
};

enum class Side { Above, Below };

// ---------------------------------------------------------------------------
// Norm helpers. Free functions over Eigen expressions.

/// Operator norm (largest singular value).
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a);

/// Schatten-p (quasi-)norm; p = +inf gives the operator norm.
template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& a, double p);

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).norm();
}

// ---------------------------------------------------------------------------

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Throws
/// NotHermitian when ||a - a*||_F > herm_tol * ||a||_F.
HermEig herm_eig(const Matrix& a, double herm_tol = Tol::herm);

/// Eigenvalues only (no basis accumulation).
RealVector herm_eigenvalues(const Matrix& a, double herm_tol = Tol::herm);

/// One-sided (Hestenes) Jacobi SVD, thin form.
Svd svd(const Matrix& a);

/// Singular values only, nonincreasing, length min(rows, cols).
RealVector singular_values(const Matrix& a);

/// Spectral scale used for relative PSD checks.
double spectral_scale(const RealVector& eigenvalues);

/// basis * diag(f(lambda)) * basis* for PSD a. Eigenvalues below
/// -psd_tol * ||a|| raise NotPsd; the rest are clamped at zero.
template <typename F>
Matrix psd_fn(const Matrix& a, F&& f, double psd_tol = Tol::psd) {
  const HermEig eig = herm_eig(a);
  const double scale = spectral_scale(eig.eigenvalues);
  RealVector mapped(eig.eigenvalues.size());
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double lambda = eig.eigenvalues(i);
    if (lambda < -psd_tol * scale) {
      throw Error(ErrorKind::NotPsd, "eigenvalue " + std::to_string(lambda) + " below -psd_tol*scale");
    }
    if (lambda < 0.0) lambda = 0.0;
    mapped(i) = f(lambda);
  }
  Matrix out = eig.basis * mapped.cast<Complex>().asDiagonal() * eig.basis.adjoint();
  return 0.5 * (out + out.adjoint());
}

/// Positive square root of a PSD matrix.
Matrix psd_sqrt(const Matrix& a);

/// Moore-Penrose inverse square root: lambda^{-1/2} above rank_tol * lambda_max, 0 below.
Matrix pseudo_sqrt_inv(const Matrix& a, double rank_tol = Tol::rank);

/// Moore-Penrose pseudo-inverse of a PSD matrix.
Matrix pseudo_inv_psd(const Matrix& a, double rank_tol = Tol::rank);

/// Orthogonal projection onto eigenvalues > rank_tol * lambda_max of a PSD matrix.
Matrix support_projection(const Matrix& a, double rank_tol = Tol::rank);

/// Polar decomposition with a true partial isometry of numerical rank.
PolarParts polar(const Matrix& a, double rank_tol = Tol::rank);

/// Projection onto eigenvectors with eigenvalue >= threshold (Above) or < threshold (Below).
Matrix spectral_projection(const Matrix& a, double threshold, Side side);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with phase-corrected diagonal.
Matrix haar_unitary(Index dim, std::uint64_t seed);

/// Complex Gaussian matrix with independent N(0,1/2)+iN(0,1/2) entries.
Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// splitmix64 mixing, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------

template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  const RealVector s = singular_values(Matrix(a.template cast<Complex>()));
  return s.size() ? s(0) : 0.0;
}

template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& a, double p) {
  if (a.size() == 0) return 0.0;
  const RealVector s = singular_values(Matrix(a.template cast<Complex>()));
  if (std::isinf(p)) return s.size() ? s(0) : 0.0;
  double acc = 0.0;
  for (Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace nck
