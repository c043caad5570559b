#include "nck/factor.hpp"

#include <cmath>

namespace nck {

namespace {

struct StackParts {
  Matrix modulus;  // U S U^* (rows) or V S V^* (columns)
  Matrix support;
  Matrix partial;  // polar isometry of the stack, restricted to the support
};

// Modulus, support and polar part of a stack from its SVD; singular values at
// or below `cut` are treated as zero. Working from the SVD rather than the
// square root of the Gram matrix keeps small singular values accurate.
StackParts stack_parts(const Matrix& stack, double cut, bool row_side) {
  const Svd s = svd(stack);
  Index rank = 0;
  while (rank < s.singulars.size() && s.singulars(rank) > cut) ++rank;
  const Matrix& side = row_side ? s.left : s.right;
  const Matrix m = side * s.singulars.cast<Complex>().asDiagonal() * side.adjoint();
  const Matrix us = s.left.leftCols(rank);
  const Matrix vs = s.right.leftCols(rank);
  const Matrix sides = side.leftCols(rank);
  return {0.5 * (m + m.adjoint()), sides * sides.adjoint(), us * vs.adjoint()};
}

double max_eig(const Matrix& a) { return herm_eigenvalues(0.5 * (a + a.adjoint()))(0); }
double min_eig(const Matrix& a) {
  const RealVector ev = herm_eigenvalues(0.5 * (a + a.adjoint()));
  return ev(ev.size() - 1);
}

}  // namespace

FactorizationResult extract_factorization(const OpSequence& x, const DecompositionResult& dec,
                                          double rank_tol) {
  x.validate();
  FactorizationResult fac;
  fac.rank_tol = rank_tol;
  for (const Matrix& xi : x.items) fac.scale = std::max(fac.scale, op_norm(xi));
  const Index d = x.dim;
  const Matrix id = Matrix::Identity(d, d);

  const Matrix ry = row_stack(dec.y);
  const Matrix cz = col_stack(dec.z);
  const double top = std::max(op_norm(ry), op_norm(cz));
  if (!(top > 0.0)) {
    if (fac.scale > 0.0) {
      throw Error(ErrorKind::DegenerateSupport, "alpha and beta vanish for nonzero x");
    }
    fac.alpha = fac.beta = fac.e = fac.f = Matrix::Zero(d, d);
    fac.u = OpSequence::zeros(d, x.size());
    return fac;
  }
  const double cut = rank_tol * top;
  const StackParts pa = stack_parts(ry, cut, true);
  const StackParts pb = stack_parts(cz, cut, false);
  fac.alpha = pa.modulus;
  fac.beta = pb.modulus;
  fac.e = pa.support;
  fac.f = pb.support;

  // v_i = alpha^+ y_i and w_i = z_i beta^+ are the blocks of the polar parts.
  const OpSequence v = from_row_stack(pa.partial, d);
  const OpSequence w = from_col_stack(pb.partial, d);
  fac.u = v + (id - fac.e) * w;
  // The dual element fixes u on the corner (1 - e) . (1 - f), which the
  // completion above leaves empty; without it the contraction bounds can fail
  // when both supports are deficient.
  if (dec.certificate.size() == x.size() && dec.certificate.dim == d) {
    fac.u = fac.u + (id - fac.e) * dec.certificate * (id - fac.f);
  }

  for (std::size_t i = 0; i < x.size(); ++i) {
    const Matrix ay = fac.alpha * fac.u[i];
    const Matrix zb = fac.u[i] * fac.beta;
    fac.r_factor = std::max(fac.r_factor, (x[i] - ay - zb).norm());
    fac.r_consistency = std::max(fac.r_consistency, (v[i] * fac.f - fac.e * w[i]).norm());
    fac.r_y = std::max(fac.r_y, (ay - dec.y[i]).norm());
    fac.r_z = std::max(fac.r_z, (zb - dec.z[i]).norm());
  }
  const Matrix rows = row_gram(fac.u);
  const Matrix cols = col_gram(fac.u);
  fac.r_row = std::max({0.0, max_eig(rows) - 1.0, -min_eig(rows - fac.e)});
  fac.r_col = std::max({0.0, max_eig(cols) - 1.0, -min_eig(cols - fac.f)});
  return fac;
}

DecompositionResult symmetrize(const OpSequence& x, const DecompositionResult& dec) {
  for (const Matrix& xi : x.items) {
    if ((xi - xi.adjoint()).norm() > 1e-12 * std::max(1.0, xi.norm())) {
      throw Error(ErrorKind::InvalidArgument, "symmetrize needs self-adjoint x_i");
    }
  }
  DecompositionResult out = dec;
  out.y = Complex(0.5, 0.0) * (dec.y + adjoint(dec.z));
  out.z = Complex(0.5, 0.0) * (dec.z + adjoint(dec.y));
  // u^* is dual optimal for x^* = x, so the average stays dual optimal.
  if (dec.certificate.size() == x.size()) {
    out.certificate = Complex(0.5, 0.0) * (dec.certificate + adjoint(dec.certificate));
  }
  out.primal = decomposition_value(out.y, out.z);
  out.gap = out.primal - out.dual_bound;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, (out.y[i] + out.z[i] - x[i]).norm());
  out.constraint_residual = worst;
  return out;
}

namespace {

void finish_band(RatioBand& band) {
  band.min = kInf;
  band.max = 0.0;
  for (double r : band.ratio) {
    band.min = std::min(band.min, r);
    band.max = std::max(band.max, r);
  }
  if (band.ratio.empty()) band.min = 0.0;
}

}  // namespace

RatioBand kt_alpha_equivalence(const OpSequence& x, const FactorizationResult& fac, double p,
                               std::span<const double> t_grid, const GModel& model) {
  const Profile g = g_profile(x, model);
  const Profile pa = profile_of(fac.alpha);
  const Profile pb = profile_of(fac.beta);
  RatioBand band;
  band.label = model.label();
  band.in_hypothesis = model.is_surrogate();
  for (double t : t_grid) {
    const double kg = k_proxy(g, p, kInf, t);
    const double ks = k_proxy(pa, p, kInf, t) + k_proxy(pb, p, kInf, t);
    band.t.push_back(t);
    band.ratio.push_back(kg > 0.0 ? ks / kg : 0.0);
  }
  finish_band(band);
  return band;
}

RatioBand commutator_k_ratio(const Matrix& alpha, const Matrix& beta, const Matrix& b,
                             double theta, double p, double q, std::span<const double> t_grid) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "commutator_k_ratio needs theta in (0, 1)");
  }
  const double bnorm = op_norm(b);
  if (!(bnorm > 0.0)) throw Error(ErrorKind::InvalidArgument, "commutator_k_ratio needs b != 0");
  auto power = [theta](double l) { return std::pow(l, theta); };
  const Matrix num_op = psd_fn(alpha, power) * b + b * psd_fn(beta, power);
  const Matrix den_op = alpha * b + b * beta;
  const Profile num = profile_of(num_op);
  const Profile den = profile_of(den_op);
  const double q_theta = std::isinf(q) ? kInf : q / theta;
  RatioBand band;
  band.label = "commutator";
  for (double t : t_grid) {
    const double top = k_proxy(num, p / theta, q_theta, std::pow(t, theta));
    const double bottom = std::pow(k_proxy(den, p, q, t), theta) * std::pow(bnorm, 1.0 - theta);
    band.t.push_back(t);
    band.ratio.push_back(bottom > 0.0 ? top / bottom : (top > 0.0 ? kInf : 0.0));
  }
  finish_band(band);
  return band;
}

}  // namespace nck
