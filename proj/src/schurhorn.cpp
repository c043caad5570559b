#include "nck/schurhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace nck {

namespace {

std::vector<double> sorted_desc(const RealVector& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

// Applies the plane rotation (c, s) to rows and columns k, j of a symmetric matrix.
void rotate_symmetric(RealMatrix& m, Index k, Index j, double c, double s) {
  const RealVector rk = m.row(k);
  const RealVector rj = m.row(j);
  m.row(k) = c * rk + s * rj;
  m.row(j) = -s * rk + c * rj;
  const RealVector ck = m.col(k);
  const RealVector cj = m.col(j);
  m.col(k) = c * ck + s * cj;
  m.col(j) = -s * ck + c * cj;
}

void rotate_rows(RealMatrix& m, Index k, Index j, double c, double s) {
  const RealVector rk = m.row(k);
  const RealVector rj = m.row(j);
  m.row(k) = c * rk + s * rj;
  m.row(j) = -s * rk + c * rj;
}

void swap_symmetric(RealMatrix& m, Index a, Index b) {
  if (a == b) return;
  m.row(a).swap(m.row(b));
  m.col(a).swap(m.col(b));
}

}  // namespace

MajorizationPair::MajorizationPair(RealVector l, RealVector d) {
  if (l.size() == 0 && d.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty majorization pair");
  const Index n = std::max(l.size(), d.size());
  lambda = RealVector::Zero(n);
  diag = RealVector::Zero(n);
  lambda.head(l.size()) = l;
  diag.head(d.size()) = d;
  if (!lambda.allFinite() || !diag.allFinite() || lambda.minCoeff() < 0.0 || diag.minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "majorization pair entries must be finite and nonnegative");
  }
}

double MajorizationPair::scale() const {
  return std::max({lambda.size() ? lambda.maxCoeff() : 0.0, diag.size() ? diag.maxCoeff() : 0.0,
                   std::numeric_limits<double>::min()});
}

double MajorizationPair::majorization_defect() const {
  const std::vector<double> l = sorted_desc(lambda);
  const std::vector<double> d = sorted_desc(diag);
  double sl = 0.0;
  double sd = 0.0;
  double worst = -kInf;
  for (std::size_t i = 0; i < l.size(); ++i) {
    sl += l[i];
    sd += d[i];
    worst = std::max(worst, sd - sl);
  }
  return std::max(worst, std::abs(sl - sd));
}

ChanLiResult chan_li(const MajorizationPair& pair, double tol) {
  const Index n = pair.size();
  const double scale = pair.scale();
  const double slack = tol * scale;
  const double defect = pair.majorization_defect();
  if (defect > slack) {
    throw Error(ErrorKind::MajorizationViolated,
                "lambda does not majorize diag (defect " + std::to_string(defect / scale) + " relative)");
  }

  // Process the targets in nonincreasing order; permute back at the end.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return pair.diag(a) > pair.diag(b); });

  RealMatrix m = pair.lambda.asDiagonal();
  RealMatrix basis = RealMatrix::Identity(n, n);
  RealVector live = pair.lambda;  // trailing diagonal values at positions k..n-1
  int rotations = 0;

  for (Index k = 0; k < n; ++k) {
    const double d = pair.diag(order[static_cast<std::size_t>(k)]);
    Index above = -1;
    Index below = -1;
    for (Index m_idx = k; m_idx < n; ++m_idx) {
      const double v = live(m_idx);
      if (v >= d && (above < 0 || v < live(above))) above = m_idx;
      if (v <= d && (below < 0 || v > live(below))) below = m_idx;
    }
    // Rounding can leave the last leftovers a hair outside the bracket.
    if (above < 0 || below < 0) {
      Index nearest = k;
      for (Index m_idx = k; m_idx < n; ++m_idx) {
        if (std::abs(live(m_idx) - d) < std::abs(live(nearest) - d)) nearest = m_idx;
      }
      if (std::abs(live(nearest) - d) > slack) {
        throw Error(ErrorKind::NumericalBreakdown, "no bracketing eigenvalue pair at step " +
                                                       std::to_string(k));
      }
      above = below = nearest;
    }

    const double li = live(above);
    const double lj = live(below);
    const bool degenerate = above == below || li == d || lj == d || li - lj <= 0.0;
    if (degenerate) {
      const Index pick = (li == d || above == below) ? above : below;
      swap_symmetric(m, k, pick);
      basis.row(k).swap(basis.row(pick));
      std::swap(live(k), live(pick));
      continue;
    }

    swap_symmetric(m, k, above);
    basis.row(k).swap(basis.row(above));
    std::swap(live(k), live(above));
    Index j = below == k ? above : below;

    const double c2 = std::clamp((d - lj) / (li - lj), 0.0, 1.0);
    const double c = std::sqrt(c2);
    const double s = std::sqrt(1.0 - c2);
    rotate_symmetric(m, k, j, c, s);
    rotate_rows(basis, k, j, c, s);
    ++rotations;
    live(j) = li + lj - d;
    live(k) = d;
  }

  ChanLiResult out;
  out.M.resize(n, n);
  out.basis.resize(n, n);
  for (Index a = 0; a < n; ++a) {
    const Index oa = order[static_cast<std::size_t>(a)];
    out.basis.row(oa) = basis.row(a);
    for (Index b = 0; b < n; ++b) out.M(oa, order[static_cast<std::size_t>(b)]) = m(a, b);
  }
  out.M = 0.5 * (out.M + out.M.transpose());
  out.eigenvalues = pair.lambda;
  out.rotations = rotations;
  const double lmax = std::max(pair.lambda.maxCoeff(), std::numeric_limits<double>::min());
  out.diag_error = (out.M.diagonal() - pair.diag).cwiseAbs().maxCoeff() / lmax;
  out.trace_drift = std::abs(out.M.trace() - pair.lambda.sum()) / lmax;
  out.frobenius_drift = std::abs(out.M.norm() - pair.lambda.norm()) / lmax;
  return out;
}

double spectrum_error(const ChanLiResult& r, const MajorizationPair& pair) {
  const RealVector eig = herm_eigenvalues(r.M.cast<Complex>());
  const std::vector<double> target = sorted_desc(pair.lambda);
  double worst = 0.0;
  for (Index i = 0; i < eig.size(); ++i) {
    worst = std::max(worst, std::abs(eig(i) - target[static_cast<std::size_t>(i)]));
  }
  const double lmax = std::max(target.front(), std::numeric_limits<double>::min());
  return worst / lmax;
}

RealMatrix sqrt_from_basis(const ChanLiResult& r) {
  const RealVector root = r.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return r.basis * root.asDiagonal() * r.basis.transpose();
}

namespace {

OpSequence rows_of(const Matrix& root) {
  const Index n = root.rows();
  OpSequence x(n, {});
  x.items.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Matrix xi = Matrix::Zero(n, n);
    xi.row(i) = root.row(i);
    x.items.push_back(std::move(xi));
  }
  return x;
}

}  // namespace

OpSequence build_x(const Matrix& M) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "build_x needs a nonempty square matrix");
  }
  return rows_of(psd_sqrt(M));
}

OpSequence build_x(const ChanLiResult& r) { return rows_of(sqrt_from_basis(r).cast<Complex>()); }

double harmonic(int N) {
  double h = 0.0;
  for (int i = N; i >= 1; --i) h += 1.0 / i;
  return h;
}

long long divisor_sum_count(int N) {
  long long v = 0;
  for (int i = 1; i <= N; ++i) v += N / i;
  return v;
}

namespace {

// With x_i = e_ii M^{1/2} the cross terms x_i^* x_j vanish, so every sign
// block of Gx has modulus M^{1/2} and |(Rx)^*|^2 = Diag(M), |Cx|^2 = M.
CounterexampleReport report_from(const MajorizationPair& pair, const ChanLiResult& r,
                                 Index verify_cap) {
  CounterexampleReport rep;
  rep.size = pair.size();
  rep.diag_error = r.diag_error;
  RealVector eig;
  if (pair.size() <= verify_cap) {
    eig = herm_eigenvalues(r.M.cast<Complex>());
    rep.verified = true;
    rep.spectrum_error = spectrum_error(r, pair);
  } else {
    eig = r.eigenvalues;
    rep.spectrum_error = std::numeric_limits<double>::quiet_NaN();
  }
  const RealVector g_sv = eig.cwiseMax(0.0).cwiseSqrt();
  const RealVector r_sv = r.M.diagonal().cwiseMax(0.0).cwiseSqrt();
  const Profile g = profile_from_values(std::span<const double>(g_sv.data(), g_sv.size()));
  const Profile row = profile_from_values(std::span<const double>(r_sv.data(), r_sv.size()));
  rep.g_weak2 = weak_lp(g, 2.0);
  rep.r_weak2 = weak_lp(row, 2.0);
  rep.c_weak2 = rep.g_weak2;
  return rep;
}

}  // namespace

CounterexampleReport family1(int N, Index verify_cap) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "family1 needs N >= 1");
  RealVector lambda = RealVector::Zero(N);
  RealVector diag(N);
  for (int i = 0; i < N; ++i) diag(i) = 1.0 / (i + 1);
  lambda(0) = harmonic(N);
  const MajorizationPair pair(lambda, diag);
  CounterexampleReport rep = report_from(pair, chan_li(pair), verify_cap);
  rep.N = N;
  rep.family = 1;
  rep.ratio = rep.g_weak2 / rep.r_weak2;
  rep.g_closed = std::sqrt(harmonic(N));
  rep.r_closed = 1.0;
  return rep;
}

CounterexampleReport family2(int N, Index verify_cap) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "family2 needs N >= 1");
  const long long v = divisor_sum_count(N);
  RealVector lambda = RealVector::Zero(v);
  for (int i = 0; i < N; ++i) lambda(i) = static_cast<double>(N / (i + 1));
  const MajorizationPair pair(lambda, RealVector::Ones(v));
  CounterexampleReport rep = report_from(pair, chan_li(pair), verify_cap);
  rep.N = N;
  rep.family = 2;
  rep.ratio = rep.r_weak2 / rep.g_weak2;
  rep.g_closed = std::sqrt(static_cast<double>(N));
  rep.r_closed = std::sqrt(static_cast<double>(v));
  return rep;
}

MajorizationPair random_majorizing_pair(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) {
    // A share of exact zeros and repeated values exercises the degenerate branches.
    const double u = unif(rng);
    lambda(i) = u < 0.15 ? 0.0 : (u < 0.25 && i > 0 ? lambda(i - 1) : 10.0 * unif(rng));
  }
  std::normal_distribution<double> normal;
  RealMatrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  const RealMatrix q = Eigen::HouseholderQR<RealMatrix>(g).householderQ();
  const RealMatrix a = q * lambda.asDiagonal() * q.transpose();
  return MajorizationPair(lambda, a.diagonal());
}

}  // namespace nck
