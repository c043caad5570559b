#include "nck/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nck {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = 2.220446049250313e-16;

// J = [[c, s*phase], [-s*conj(phase), c]] annihilates the (p,q) entry of
// J* [[app, apq], [conj(apq), aqq]] J.
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  double t = 0.0;
  Complex phase{1.0, 0.0};
};

Rotation make_rotation(double app, double aqq, Complex apq) {
  Rotation rot;
  const double g = std::abs(apq);
  const double tau = (aqq - app) / (2.0 * g);
  rot.t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  rot.c = 1.0 / std::sqrt(1.0 + rot.t * rot.t);
  rot.s = rot.t * rot.c;
  rot.phase = apq / g;
  return rot;
}

// cols (p, q) <- (c*col_p - s*conj(phase)*col_q, s*phase*col_p + c*col_q)
void rotate_columns(Matrix& m, Index p, Index q, const Rotation& r) {
  const Complex a = -r.s * std::conj(r.phase);
  const Complex b = r.s * r.phase;
  for (Index k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = r.c * mp + a * mq;
    m(k, q) = b * mp + r.c * mq;
  }
}

void check_hermitian(const Matrix& a, double herm_tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::NotHermitian, "matrix is not square");
  }
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite entries");
  const double scale = a.norm();
  if (hermitian_defect(a) > herm_tol * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::NotHermitian, "||a - a*|| exceeds tolerance");
  }
}

// Cyclic Jacobi on a Hermitian working copy. Returns unsorted eigenvalues.
RealVector jacobi_hermitian(Matrix a, Matrix* basis) {
  const Index n = a.rows();
  a = 0.5 * (a + a.adjoint()).eval();
  if (basis) basis->setIdentity(n, n);
  const double fro = a.norm();
  if (fro == 0.0) return RealVector::Zero(n);
  const double skip = 1e-18 * fro;
  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * fro) break;
    if (sweep >= kMaxSweeps) {
      throw Error(ErrorKind::NoConvergence, "Jacobi sweep limit exceeded");
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Rotation r = make_rotation(app, aqq, apq);
        rotate_columns(a, p, q, r);
        a.row(p) = a.col(p).adjoint();
        a.row(q) = a.col(q).adjoint();
        const double g = std::abs(apq);
        a(p, p) = app - r.t * g;
        a(q, q) = aqq + r.t * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (basis) rotate_columns(*basis, p, q, r);
      }
    }
  }
  return a.diagonal().real();
}

std::vector<Index> descending_order(const RealVector& v) {
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return v(i) > v(j); });
  return order;
}

// One-sided Jacobi on a tall matrix: orthogonalizes the columns of g in place.
void hestenes(Matrix& g, Matrix* v) {
  const Index n = g.cols();
  // Rounding in the column dot products grows with the column length.
  const double tol = std::max(1e-15, kEps * static_cast<double>(g.rows()));
  // Columns below eps * ||g||_F carry no resolvable direction.
  const double floor = std::pow(kEps * g.norm(), 2);
  if (v) v->setIdentity(n, n);
  for (int sweep = 0;; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = g.col(p).squaredNorm();
        const double beta = g.col(q).squaredNorm();
        const Complex gamma = g.col(p).dot(g.col(q));
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= tol * std::sqrt(alpha * beta)) continue;
        if (std::min(alpha, beta) <= floor) continue;
        rotated = true;
        const Rotation r = make_rotation(alpha, beta, gamma);
        rotate_columns(g, p, q, r);
        if (v) rotate_columns(*v, p, q, r);
      }
    }
    if (!rotated) return;
    if (sweep >= kMaxSweeps) {
      throw Error(ErrorKind::NoConvergence, "one-sided Jacobi sweep limit exceeded");
    }
  }
}

// Fills columns [filled, k) of q with unit vectors orthogonal to everything before.
void complete_orthonormal(Matrix& q, Index filled) {
  const Index m = q.rows();
  for (Index j = filled; j < q.cols(); ++j) {
    Eigen::VectorXcd best;
    double best_norm = -1.0;
    for (Index k = 0; k < m; ++k) {
      Eigen::VectorXcd cand = Eigen::VectorXcd::Unit(m, k);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < j; ++i) cand -= q.col(i).dot(cand) * q.col(i);
      }
      const double nrm = cand.norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = cand;
      }
      if (nrm > 0.7) break;
    }
    q.col(j) = best / best_norm;
  }
}

// Thin SVD of a tall (rows >= cols) matrix.
Svd svd_tall(const Matrix& a, bool want_vectors) {
  const Index n = a.cols();
  Matrix g = a;
  Matrix v;
  hestenes(g, want_vectors ? &v : nullptr);
  RealVector norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = g.col(j).norm();
  const auto order = descending_order(norms);
  Svd out;
  out.singulars.resize(n);
  for (Index j = 0; j < n; ++j) out.singulars(j) = norms(order[static_cast<std::size_t>(j)]);
  if (!want_vectors) return out;
  out.left.resize(a.rows(), n);
  out.right.resize(n, n);
  const double smax = n ? out.singulars(0) : 0.0;
  const double cutoff = kEps * static_cast<double>(std::max(a.rows(), a.cols())) * smax;
  Index filled = 0;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.right.col(j) = v.col(src);
    if (out.singulars(j) > cutoff && out.singulars(j) > 0.0) {
      out.left.col(j) = g.col(src) / out.singulars(j);
      filled = j + 1;
    }
  }
  complete_orthonormal(out.left, filled);
  return out;
}

}  // namespace

HermEig herm_eig(const Matrix& a, double herm_tol) {
  check_hermitian(a, herm_tol);
  Matrix basis;
  const RealVector raw = jacobi_hermitian(a, &basis);
  const auto order = descending_order(raw);
  HermEig out;
  out.eigenvalues.resize(raw.size());
  out.basis.resize(a.rows(), a.cols());
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.eigenvalues(static_cast<Index>(j)) = raw(order[j]);
    out.basis.col(static_cast<Index>(j)) = basis.col(order[j]);
  }
  return out;
}

RealVector herm_eigenvalues(const Matrix& a, double herm_tol) {
  check_hermitian(a, herm_tol);
  RealVector raw = jacobi_hermitian(a, nullptr);
  std::sort(raw.data(), raw.data() + raw.size(), std::greater<>());
  return raw;
}

Svd svd(const Matrix& a) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite entries");
  if (a.rows() >= a.cols()) return svd_tall(a, true);
  Svd t = svd_tall(a.adjoint(), true);
  return Svd{std::move(t.right), std::move(t.singulars), std::move(t.left)};
}

RealVector singular_values(const Matrix& a) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite entries");
  if (a.size() == 0) return RealVector();
  if (a.rows() >= a.cols()) return svd_tall(a, false).singulars;
  return svd_tall(a.adjoint(), false).singulars;
}

double spectral_scale(const RealVector& eigenvalues) {
  return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

Matrix psd_sqrt(const Matrix& a) {
  return psd_fn(a, [](double l) { return std::sqrt(l); });
}

Matrix pseudo_sqrt_inv(const Matrix& a, double rank_tol) {
  const HermEig eig = herm_eig(a);
  const double cut = rank_tol * std::max(eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0, 0.0);
  RealVector mapped(eig.eigenvalues.size());
  for (Index i = 0; i < mapped.size(); ++i) {
    const double l = eig.eigenvalues(i);
    mapped(i) = (l > cut && l > 0.0) ? 1.0 / std::sqrt(l) : 0.0;
  }
  Matrix out = eig.basis * mapped.cast<Complex>().asDiagonal() * eig.basis.adjoint();
  return 0.5 * (out + out.adjoint());
}

Matrix pseudo_inv_psd(const Matrix& a, double rank_tol) {
  const HermEig eig = herm_eig(a);
  const double cut = rank_tol * std::max(eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0, 0.0);
  RealVector mapped(eig.eigenvalues.size());
  for (Index i = 0; i < mapped.size(); ++i) {
    const double l = eig.eigenvalues(i);
    mapped(i) = (l > cut && l > 0.0) ? 1.0 / l : 0.0;
  }
  Matrix out = eig.basis * mapped.cast<Complex>().asDiagonal() * eig.basis.adjoint();
  return 0.5 * (out + out.adjoint());
}

Matrix support_projection(const Matrix& a, double rank_tol) {
  const HermEig eig = herm_eig(a);
  const double cut = rank_tol * std::max(eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0, 0.0);
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cut && eig.eigenvalues(i) > 0.0) {
      out += eig.basis.col(i) * eig.basis.col(i).adjoint();
    }
  }
  return out;
}

PolarParts polar(const Matrix& a, double rank_tol) {
  const Svd s = svd(a);
  const Index k = s.singulars.size();
  const double cut = rank_tol * (k ? s.singulars(0) : 0.0);
  PolarParts out;
  out.isometry = Matrix::Zero(a.rows(), a.cols());
  for (Index j = 0; j < k; ++j) {
    if (s.singulars(j) > cut && s.singulars(j) > 0.0) {
      out.isometry += s.left.col(j) * s.right.col(j).adjoint();
    }
  }
  out.modulus = s.right * s.singulars.cast<Complex>().asDiagonal() * s.right.adjoint();
  out.modulus = 0.5 * (out.modulus + out.modulus.adjoint()).eval();
  return out;
}

Matrix spectral_projection(const Matrix& a, double threshold, Side side) {
  const HermEig eig = herm_eig(a);
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const bool above = eig.eigenvalues(i) >= threshold;
    if (above == (side == Side::Above)) out += eig.basis.col(i) * eig.basis.col(i).adjoint();
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

Matrix haar_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "haar_unitary: dim must be >= 1");
  std::mt19937_64 rng(seed);
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : Complex(1.0, 0.0));
  }
  return q;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace nck
