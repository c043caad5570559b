#include "nck/rowcol.hpp"

#include <cmath>

#include "nck/parallel.hpp"

namespace nck {

OpSequence::OpSequence(Index d, std::vector<Matrix> xs) : dim(d), items(std::move(xs)) {}

void OpSequence::validate() const {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "OpSequence dim must be >= 1");
  if (items.empty()) throw Error(ErrorKind::InvalidArgument, "OpSequence must have N >= 1 items");
  for (const Matrix& m : items) {
    if (m.rows() != dim || m.cols() != dim) {
      throw Error(ErrorKind::InvalidArgument, "OpSequence items must all be dim x dim");
    }
    if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "OpSequence has non-finite entries");
  }
}

OpSequence OpSequence::zeros(Index d, std::size_t n) {
  return OpSequence(d, std::vector<Matrix>(n, Matrix::Zero(d, d)));
}

namespace {

template <typename Op>
OpSequence zip(const OpSequence& a, const OpSequence& b, Op op) {
  if (a.size() != b.size() || a.dim != b.dim) {
    throw Error(ErrorKind::InvalidArgument, "OpSequence shapes differ");
  }
  OpSequence out(a.dim, {});
  out.items.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.items.push_back(op(a[i], b[i]));
  return out;
}

}  // namespace

OpSequence operator+(const OpSequence& a, const OpSequence& b) {
  return zip(a, b, [](const Matrix& u, const Matrix& v) -> Matrix { return u + v; });
}

OpSequence operator-(const OpSequence& a, const OpSequence& b) {
  return zip(a, b, [](const Matrix& u, const Matrix& v) -> Matrix { return u - v; });
}

OpSequence operator*(Complex s, const OpSequence& a) {
  OpSequence out = a;
  for (Matrix& m : out.items) m *= s;
  return out;
}

OpSequence operator*(const Matrix& e, const OpSequence& x) {
  OpSequence out = x;
  for (Matrix& m : out.items) m = e * m;
  return out;
}

OpSequence operator*(const OpSequence& x, const Matrix& f) {
  OpSequence out = x;
  for (Matrix& m : out.items) m = m * f;
  return out;
}

OpSequence adjoint(const OpSequence& x) {
  OpSequence out = x;
  for (Matrix& m : out.items) m = m.adjoint().eval();
  return out;
}

double max_distance(const OpSequence& a, const OpSequence& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).norm());
  return worst;
}

Matrix row_stack(const OpSequence& x) {
  const Index d = x.dim;
  Matrix r(d, d * static_cast<Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) r.middleCols(static_cast<Index>(i) * d, d) = x[i];
  return r;
}

Matrix col_stack(const OpSequence& x) {
  const Index d = x.dim;
  Matrix c(d * static_cast<Index>(x.size()), d);
  for (std::size_t i = 0; i < x.size(); ++i) c.middleRows(static_cast<Index>(i) * d, d) = x[i];
  return c;
}

OpSequence from_row_stack(const Matrix& r, Index d) {
  OpSequence out(d, {});
  for (Index i = 0; i < r.cols() / d; ++i) out.items.push_back(r.middleCols(i * d, d));
  return out;
}

OpSequence from_col_stack(const Matrix& c, Index d) {
  OpSequence out(d, {});
  for (Index i = 0; i < c.rows() / d; ++i) out.items.push_back(c.middleRows(i * d, d));
  return out;
}

Matrix row_gram(const OpSequence& x) {
  Matrix g = Matrix::Zero(x.dim, x.dim);
  for (const Matrix& m : x.items) g += m * m.adjoint();
  return 0.5 * (g + g.adjoint());
}

Matrix col_gram(const OpSequence& x) {
  Matrix g = Matrix::Zero(x.dim, x.dim);
  for (const Matrix& m : x.items) g += m.adjoint() * m;
  return 0.5 * (g + g.adjoint());
}

std::string GModel::label() const {
  if (kind == Kind::Rademacher) return "rademacher";
  return "haar_surrogate:" + std::to_string(haar_dim);
}

Matrix haar_block_sum(const OpSequence& x, Index haar_dim, std::uint64_t seed) {
  Matrix g = Matrix::Zero(x.dim * haar_dim, x.dim * haar_dim);
  for (std::size_t i = 0; i < x.size(); ++i) {
    g += kron(x[i], haar_unitary(haar_dim, mix_seed(seed, i)));
  }
  return g;
}

Profile g_profile(const OpSequence& x, const GModel& model) {
  x.validate();
  if (model.kind == GModel::Kind::HaarSurrogate) {
    const Matrix g = haar_block_sum(x, model.haar_dim, model.seed);
    return profile_of(g, 1.0 / static_cast<double>(model.haar_dim));
  }
  const std::size_t n = x.size();
  if (n > model.enumeration_cap || n > 62) {
    throw Error(ErrorKind::CapExceeded, "Rademacher enumeration needs N <= " +
                                            std::to_string(model.enumeration_cap) + ", got N = " +
                                            std::to_string(n));
  }
  const std::size_t patterns = std::size_t{1} << n;
  const double weight = std::ldexp(1.0, -static_cast<int>(n));
  const std::size_t block = 256;
  const std::size_t blocks = (patterns + block - 1) / block;
  std::vector<Profile> parts(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<Step> steps;
    const std::size_t end = std::min(patterns, (b + 1) * block);
    for (std::size_t mask = b * block; mask < end; ++mask) {
      Matrix s = Matrix::Zero(x.dim, x.dim);
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          s -= x[i];
        } else {
          s += x[i];
        }
      }
      const RealVector sv = singular_values(s);
      for (Index k = 0; k < sv.size(); ++k) steps.push_back({sv(k), weight});
    }
    parts[b] = Profile(std::move(steps));
  });
  return merge(parts);
}

LemmaTrickReport lemma_trick_check(const OpSequence& x, const Matrix& e, double p,
                                   std::span<const Matrix> column_projections, double commute_tol) {
  x.validate();
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  LemmaTrickReport rep;
  const Matrix gram = row_gram(x);
  const Matrix modulus = psd_sqrt(gram);
  const double mod_scale = std::max(op_norm(modulus), 1e-300);
  rep.commutator = (e * modulus - modulus * e).norm() / mod_scale;
  if (rep.commutator > commute_tol) {
    throw Error(ErrorKind::NotCommuting, "projection does not commute with |(Rx)*|");
  }
  const Matrix perp = Matrix::Identity(x.dim, x.dim) - e;

  // Rounding-level eigenvalues of a rank-deficient Gram would be blown up by
  // the square root, so they are cut at the rank tolerance.
  const double cut = Tol::rank * mod_scale * mod_scale;
  auto power = [p, cut](double l) { return l > cut ? std::pow(l, p / 2.0) : 0.0; };
  const Matrix lhs = e * psd_fn(gram, power);
  const Matrix rhs = psd_fn(row_gram(e * x), power);
  rep.power_identity = (lhs - rhs).norm() / std::max(std::pow(mod_scale, p), 1e-300);

  const double total = std::pow(schatten_norm(row_stack(x), p), p);
  const double split = std::pow(schatten_norm(row_stack(e * x), p), p) +
                       std::pow(schatten_norm(row_stack(perp * x), p), p);
  rep.split_identity = std::abs(total - split) / std::max(total, 1e-300);

  const double col = schatten_norm(col_stack(x), p);
  std::vector<Matrix> fs(column_projections.begin(), column_projections.end());
  fs.push_back(e);
  fs.push_back(perp);
  for (const Matrix& f : fs) {
    const double cf = schatten_norm(col_stack(f * x), p);
    rep.column_excess = std::max(rep.column_excess, std::max(0.0, cf - col) / std::max(col, 1e-300));
  }
  rep.deviation = std::max({rep.power_identity, rep.split_identity, rep.column_excess});
  return rep;
}

}  // namespace nck
