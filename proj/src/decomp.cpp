#include "nck/decomp.hpp"

#include <cmath>
#include <deque>

namespace nck {

namespace {

struct Shrunk {
  Matrix prox;      // U max(s - 1, 0) V*
  Matrix subgrad;   // U min(s, 1) V*
};

Shrunk soft_threshold(const Matrix& a) {
  const Svd s = svd(a);
  RealVector shrunk(s.singulars.size());
  RealVector clipped(s.singulars.size());
  for (Index i = 0; i < s.singulars.size(); ++i) {
    shrunk(i) = std::max(s.singulars(i) - 1.0, 0.0);
    clipped(i) = std::min(s.singulars(i), 1.0);
  }
  return {s.left * shrunk.cast<Complex>().asDiagonal() * s.right.adjoint(),
          s.left * clipped.cast<Complex>().asDiagonal() * s.right.adjoint()};
}

double nuclear(const Matrix& a) { return singular_values(a).sum(); }

// Projection of (A, B) onto {A_i + B_i = x_i}.
void project_affine(const OpSequence& x, Matrix& a, Matrix& b) {
  const Index d = x.dim;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Index o = static_cast<Index>(i) * d;
    const Matrix r = a.middleCols(o, d) + b.middleRows(o, d) - x[i];
    a.middleCols(o, d) -= 0.5 * r;
    b.middleRows(o, d) -= 0.5 * r;
  }
}

OpSequence average_blocks(const Matrix& ga, const Matrix& gb, Index d) {
  OpSequence u = from_row_stack(ga, d);
  const OpSequence v = from_col_stack(gb, d);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * (u[i] + v[i]);
  return u;
}

double constraint_residual(const OpSequence& x, const OpSequence& y, const OpSequence& z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, (y[i] + z[i] - x[i]).norm());
  return worst;
}

}  // namespace

double decomposition_value(const OpSequence& y, const OpSequence& z) {
  return nuclear(row_stack(y)) + nuclear(col_stack(z));
}

DualCertificate certificate_from(const OpSequence& x, OpSequence u) {
  const double scale = std::max(op_norm(row_stack(u)), op_norm(col_stack(u)));
  DualCertificate cert;
  if (!(scale > 0.0)) {
    cert.u = OpSequence::zeros(x.dim, x.size());
    cert.bound = 0.0;
    return cert;
  }
  for (Matrix& m : u.items) m /= scale;
  double bound = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) bound += (u[i].adjoint() * x[i]).trace().real();
  cert.u = std::move(u);
  cert.bound = bound;
  return cert;
}

DualCertificate dual_certificate(const OpSequence& x, const OpSequence& y, const OpSequence& z,
                                 double rank_tol) {
  const Matrix ga = polar(row_stack(y), rank_tol).isometry;
  const Matrix gb = polar(col_stack(z), rank_tol).isometry;
  return certificate_from(x, average_blocks(ga, gb, x.dim));
}

DecompositionResult m1_solve(const OpSequence& x, const SolverOptions& options) {
  x.validate();
  const std::size_t width = x.size() * static_cast<std::size_t>(x.dim);
  if (width > options.size_cap) {
    throw Error(ErrorKind::CapExceeded, "m1_solve: N*d = " + std::to_string(width) +
                                            " exceeds cap " + std::to_string(options.size_cap));
  }
  DecompositionResult res;
  res.options = options;
  const Index d = x.dim;
  const double scale = std::max(op_norm(row_stack(x)), op_norm(col_stack(x)));
  if (!(scale > 0.0)) {
    res.y = OpSequence::zeros(d, x.size());
    res.z = res.y;
    res.certificate = res.y;
    res.converged = true;
    return res;
  }
  // Work on x / scale so the unit prox step matches the problem scale.
  const OpSequence xs = Complex(1.0 / scale, 0.0) * x;
  Matrix wa = 0.5 * row_stack(xs);
  Matrix wb = 0.5 * col_stack(xs);
  Matrix pa, pb, ga, gb;
  std::deque<double> history;
  double best_bound = -kInf;
  OpSequence best_u;
  double primal = kInf;
  double residual = kInf;

  int it = 0;
  for (it = 1; it <= options.max_iter; ++it) {
    pa = wa;
    pb = wb;
    project_affine(xs, pa, pb);
    const Shrunk sa = soft_threshold(2.0 * pa - wa);
    const Shrunk sb = soft_threshold(2.0 * pb - wb);
    ga = sa.subgrad;
    gb = sb.subgrad;
    residual = std::sqrt((sa.prox - pa).squaredNorm() + (sb.prox - pb).squaredNorm());
    wa += sa.prox - pa;
    wb += sb.prox - pb;

    if (it % options.check_every != 0 && it != options.max_iter) continue;
    primal = nuclear(pa) + nuclear(pb);
    DualCertificate cert = certificate_from(xs, average_blocks(ga, gb, d));
    if (cert.bound > best_bound) {
      best_bound = cert.bound;
      best_u = std::move(cert.u);
    }
    const double gap = primal - best_bound;
    if (gap <= options.tol * std::max(primal, 1e-300)) {
      res.converged = true;
      break;
    }
    history.push_back(primal);
    const std::size_t window =
        static_cast<std::size_t>(std::max(1, options.stagnation_window / options.check_every));
    if (history.size() > window) history.pop_front();
    if (history.size() == window) {
      const double change = std::abs(history.front() - history.back()) / std::max(primal, 1e-300);
      if (change <= options.tol && residual <= options.tol) {
        res.converged = true;
        break;
      }
    }
  }
  res.iterations = std::min(it, options.max_iter);

  res.y = Complex(scale, 0.0) * from_row_stack(pa, d);
  res.z = Complex(scale, 0.0) * from_col_stack(pb, d);
  res.primal = decomposition_value(res.y, res.z);

  DualCertificate cert = certificate_from(x, std::move(best_u));
  const DualCertificate polar_cert = dual_certificate(x, res.y, res.z);
  if (polar_cert.bound > cert.bound) cert = polar_cert;
  res.certificate = std::move(cert.u);
  res.dual_bound = cert.bound;
  res.gap = res.primal - res.dual_bound;
  res.constraint_residual = constraint_residual(x, res.y, res.z);
  return res;
}

Truncation lemma36_truncate(const OpSequence& x, const OpSequence& y, const OpSequence& z,
                            double A) {
  if (!(A > 0.0)) throw Error(ErrorKind::InvalidArgument, "lemma36_truncate requires A > 0");
  const Index d = x.dim;
  const Matrix id = Matrix::Identity(d, d);
  Truncation out;
  // |(Ry)*| >= A  <=>  sum y y* >= A^2
  out.e = spectral_projection(row_gram(y), A * A, Side::Above);
  out.f = spectral_projection(col_gram(z), A * A, Side::Above);
  const Matrix ep = id - out.e;
  const Matrix fp = id - out.f;
  out.y = (ep * y * fp) + (out.e * x);
  out.z = (ep * z * fp) + (ep * x * out.f);
  return out;
}

std::vector<double> default_t_grid(double min_width, double total_width, int count) {
  const double lo = std::max(min_width, 1e-12) * 0.1;
  const double hi = std::max(total_width, lo) * 4.0;
  return log_grid(lo, hi, count);
}

DominationReport k_domination_check(const OpSequence& x, const OpSequence& y,
                                    const OpSequence& z, std::span<const double> t_grid,
                                    const GModel& model) {
  const Profile g = g_profile(x, model);
  const Profile pr = profile_of(row_stack(y));
  const Profile pc = profile_of(col_stack(z));
  DominationReport rep;
  for (double t : t_grid) {
    const double kg = k_exact_1_inf(g, t);
    const double kr = k_exact_1_inf(pr, t);
    const double kc = k_exact_1_inf(pc, t);
    const double rr = kg > 0.0 ? kr / kg : (kr > 0.0 ? kInf : 0.0);
    const double rc = kg > 0.0 ? kc / kg : (kc > 0.0 ? kInf : 0.0);
    rep.t.push_back(t);
    rep.row_ratio.push_back(rr);
    rep.col_ratio.push_back(rc);
    rep.sup_row = std::max(rep.sup_row, rr);
    rep.sup_col = std::max(rep.sup_col, rc);
  }
  return rep;
}

WeakKhintchineReport weak_l1_khintchine(const OpSequence& x, const DecompositionResult& dec,
                                        const GModel& model) {
  WeakKhintchineReport rep;
  rep.g_weak1 = weak_lp(g_profile(x, model), 1.0);
  rep.r_weak1 = weak_lp(profile_of(row_stack(dec.y)), 1.0);
  rep.c_weak1 = weak_lp(profile_of(col_stack(dec.z)), 1.0);
  rep.decomposition_value = rep.r_weak1 + rep.c_weak1;
  rep.ratio = rep.decomposition_value > 0.0 ? rep.g_weak1 / rep.decomposition_value : 0.0;
  rep.m1 = dec.primal;
  rep.gap = dec.gap;
  return rep;
}

WeakKhintchineReport weak_l1_khintchine(const OpSequence& x, const SolverOptions& options) {
  const GModel model = GModel::rademacher();
  if (x.size() > model.enumeration_cap) {
    throw Error(ErrorKind::CapExceeded, "weak_l1_khintchine needs Rademacher-enumerable x");
  }
  return weak_l1_khintchine(x, m1_solve(x, options), model);
}

}  // namespace nck
