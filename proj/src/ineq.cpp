#include "nck/ineq.hpp"

#include <cmath>

#include "nck/parallel.hpp"

namespace nck {

namespace {

double min_eig(const Matrix& a) {
  const RealVector ev = herm_eigenvalues(0.5 * (a + a.adjoint()));
  return ev(ev.size() - 1);
}

// Eigenvalues at or below cut count as zero; small exponents would otherwise
// inflate rounding noise in the kernel.
Matrix power(const Matrix& a, double r, double cut = 0.0) {
  return psd_fn(a, [r, cut](double l) { return l > cut ? std::pow(l, r) : (r == 0.0 ? 1.0 : 0.0); });
}

Witness contraction(Matrix m, std::string role) {
  Witness w;
  w.matrix = std::move(m);
  w.role = std::move(role);
  return w;
}

Witness partial_isometry(Matrix m, std::string role) {
  Witness w = contraction(std::move(m), std::move(role));
  w.partial_isometry = true;
  w.isometry_defect = (w.matrix * w.matrix.adjoint() * w.matrix - w.matrix).norm();
  return w;
}

void finish(WitnessReport& rep) {
  for (const Witness& w : rep.witnesses) {
    rep.contraction_excess = std::max(rep.contraction_excess, op_norm(w.matrix) - 1.0);
    if (w.partial_isometry) rep.isometry_defect = std::max(rep.isometry_defect, w.isometry_defect);
  }
  rep.contraction_excess = std::max(rep.contraction_excess, 0.0);
}

void require_ordered(const Matrix& a, const Matrix& b, double tol) {
  const double scale = std::max(op_norm(b), 1e-300);
  if (min_eig(b - a) < -tol * scale) {
    throw Error(ErrorKind::InvalidArgument, "expected a <= b");
  }
}

}  // namespace

WitnessReport witness_i(const Matrix& a, const Matrix& b, double tol) {
  WitnessReport rep;
  rep.item = "i";
  const Matrix c = psd_sqrt(a) * pseudo_sqrt_inv(b);
  const double scale = std::max(op_norm(b), 1e-300);
  const double residual = op_norm(Matrix(a - c * b * c.adjoint())) / scale;
  if (residual > std::sqrt(tol)) {
    throw Error(ErrorKind::KernelMismatch,
                "ker b is not contained in ker a (residual " + std::to_string(residual) + ")");
  }
  require_ordered(a, b, tol);
  rep.witnesses.push_back(contraction(c, "c = a^{1/2} b^{-1/2} on the support of b"));
  rep.violation = -residual;
  finish(rep);
  return rep;
}

WitnessReport witness_ii(const Matrix& a, const Matrix& b, double tol) {
  require_ordered(a, b, tol);
  WitnessReport rep;
  rep.item = "ii";
  const Matrix u = nck::polar(psd_sqrt(a) * psd_sqrt(b)).isometry;
  rep.witnesses.push_back(partial_isometry(u, "polar isometry of a^{1/2} b^{1/2}"));
  const double scale = std::max(std::pow(op_norm(b), 2.0), 1e-300);
  rep.violation = min_eig(u * b * b * u.adjoint() - a * a) / scale;
  finish(rep);
  return rep;
}

WitnessReport witness_iii(const Matrix& a, const Matrix& b, double alpha) {
  if (!(alpha >= 1.0)) throw Error(ErrorKind::InvalidArgument, "witness_iii needs alpha >= 1");
  WitnessReport rep;
  rep.item = "iii";
  const Index d = a.rows();
  const Matrix sum = a + b;
  double base = alpha;
  int doublings = 0;
  while (base > 2.0) {
    base /= 2.0;
    ++doublings;
  }
  Matrix w = Matrix::Identity(d, d);
  rep.witnesses.push_back(
      contraction(w, "u = 1 by operator convexity at alpha = " + std::to_string(base)));
  double current = base;
  for (int k = 0; k < doublings; ++k) {
    const Matrix inner = power(a, current) + power(b, current);
    const Matrix rhs = std::pow(2.0, current - 1.0) * w * inner * w.adjoint();
    const Matrix v = nck::polar(power(sum, current / 2.0) * psd_sqrt(rhs)).isometry;
    rep.witnesses.push_back(partial_isometry(
        v, "polar isometry doubling alpha = " + std::to_string(current) + " to " +
               std::to_string(2.0 * current)));
    w = v * w;
    current *= 2.0;
  }
  if (doublings > 0) rep.witnesses.push_back(contraction(w, "composite witness"));
  const Matrix bound = std::pow(2.0, alpha - 1.0) * w * (power(a, alpha) + power(b, alpha)) * w.adjoint();
  const double scale = std::max(std::pow(op_norm(sum), alpha), 1e-300);
  rep.violation = min_eig(bound - power(sum, alpha)) / scale;
  finish(rep);
  return rep;
}

WitnessReport witness_iv(const Matrix& a, const Matrix& b, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "witness_iv needs theta in (0, 1]");
  }
  WitnessReport rep;
  rep.item = "iv";
  const Matrix x = a + b;
  const double cut = Tol::rank * op_norm(x);
  const Matrix x_inv_root = pseudo_sqrt_inv(x);
  const Matrix fa = psd_sqrt(a) * x_inv_root;
  const Matrix fb = psd_sqrt(b) * x_inv_root;
  const Matrix xh = power(x, theta / 2.0, cut);
  // y = fa x^{theta/2} = W |y|; the witness is W^*.
  const Matrix u = nck::polar(fa * xh).isometry.adjoint();
  const Matrix v = nck::polar(fb * xh).isometry.adjoint();
  rep.witnesses.push_back(contraction(fa, "a^{1/2} = alpha x^{1/2}"));
  rep.witnesses.push_back(contraction(fb, "b^{1/2} = beta x^{1/2}"));
  rep.witnesses.push_back(partial_isometry(u, "u from the polar part of alpha x^{theta/2}"));
  rep.witnesses.push_back(partial_isometry(v, "v from the polar part of beta x^{theta/2}"));
  const Matrix bound = u * power(a, theta, cut) * u.adjoint() + v * power(b, theta, cut) * v.adjoint();
  const double scale = std::max(std::pow(op_norm(x), theta), 1e-300);
  rep.violation = min_eig(bound - power(x, theta, cut)) / scale;
  finish(rep);
  return rep;
}

Matrix random_psd(Index dim, Index rank, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(dim, rank, rng);
  const Matrix p = g * g.adjoint() / static_cast<double>(std::max<Index>(rank, 1));
  return 0.5 * (p + p.adjoint());
}

namespace {

Matrix random_contraction_psd(Index dim, std::mt19937_64& rng) {
  const Matrix q = haar_unitary(dim, rng());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealVector s(dim);
  for (Index i = 0; i < dim; ++i) s(i) = unif(rng);
  const Matrix r = q * s.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (r + r.adjoint());
}

IneqTrial run_trial(int item, int trial, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(item) * 1000003ULL + trial));
  std::uniform_int_distribution<Index> dims(1, 8);
  const Index d = dims(rng);
  std::uniform_int_distribution<Index> ranks(1, d);
  IneqTrial out;
  out.trial = trial;
  out.dim = d;
  const Matrix b = random_psd(d, ranks(rng), rng);
  switch (item) {
    case 0:
    case 1: {
      const Matrix root = psd_sqrt(b);
      Matrix a = root * random_contraction_psd(d, rng) * root;
      a = 0.5 * (a + a.adjoint());
      out.item = item == 0 ? "i" : "ii";
      out.report = item == 0 ? witness_i(a, b, tol) : witness_ii(a, b, tol);
      break;
    }
    case 2: {
      const Matrix a = random_psd(d, ranks(rng), rng);
      std::uniform_real_distribution<double> alphas(1.0, 8.0);
      out.parameter = trial % 4 == 0 ? 4.0 : alphas(rng);
      out.item = "iii";
      out.report = witness_iii(a, b, out.parameter);
      break;
    }
    default: {
      const Matrix a = random_psd(d, ranks(rng), rng);
      std::uniform_real_distribution<double> thetas(0.0, 1.0);
      out.parameter = trial % 2 == 0 ? 0.5 : 1.0 - thetas(rng);
      out.item = "iv";
      out.report = witness_iv(a, b, out.parameter);
      break;
    }
  }
  return out;
}

}  // namespace

IneqSuiteReport ineq_suite(int trials, std::uint64_t seed, double tol) {
  if (trials < 0) throw Error(ErrorKind::InvalidArgument, "trials must be nonnegative");
  IneqSuiteReport rep;
  const std::size_t total = 4 * static_cast<std::size_t>(trials);
  rep.trials.resize(total);
  parallel_for(total, [&](std::size_t k) {
    rep.trials[k] = run_trial(static_cast<int>(k) / trials, static_cast<int>(k) % trials, seed, tol);
  });
  for (const IneqTrial& t : rep.trials) {
    rep.worst_violation = std::min(rep.worst_violation, t.report.violation);
    rep.worst_excess = std::max(rep.worst_excess, t.report.contraction_excess);
    if (!t.report.ok(tol)) ++rep.failures;
  }
  // a = b = 1 turns item iii into an equality for every alpha.
  const Matrix one = Matrix::Identity(1, 1);
  for (double alpha : {1.0, 1.5, 2.0, 3.0, 4.0, 7.0}) {
    const double lhs = std::pow(2.0, alpha);
    const double bound = std::pow(2.0, alpha - 1.0) * 2.0;
    const WitnessReport r = witness_iii(one, one, alpha);
    rep.sharpness_gap = std::max({rep.sharpness_gap, std::abs(bound - lhs) / lhs,
                                  std::abs(r.violation)});
  }
  return rep;
}

PowerSuiteReport power_theorem_suite(std::uint64_t seed, int trials) {
  PowerSuiteReport rep;
  std::vector<Profile> profiles;
  profiles.emplace_back(std::vector<Step>{{2.5, 3.0}});  // constant
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> counts(1, 12);
  std::lognormal_distribution<double> values(0.0, 1.5);
  std::uniform_real_distribution<double> widths(0.05, 2.0);
  for (int k = 0; k < trials; ++k) {
    std::vector<Step> steps;
    const int n = counts(rng);
    for (int i = 0; i < n; ++i) steps.push_back({values(rng), widths(rng)});
    profiles.emplace_back(std::move(steps));
  }
  const std::vector<double> grid = log_grid(1e-2, 1e2, 25);
  rep.min_ratio = kInf;
  rep.all_within_envelope = true;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    for (double p : {0.5, 1.0, 2.0}) {
      for (double q : {2.0 * p, 4.0 * p, kInf}) {
        for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
          const std::vector<double> ratios = power_theorem_check(profiles[k], p, q, alpha, grid);
          PowerRow row;
          row.p = p;
          row.q = q;
          row.alpha = alpha;
          row.profile = static_cast<int>(k);
          row.min_ratio = kInf;
          for (double r : ratios) {
            row.min_ratio = std::min(row.min_ratio, r);
            row.max_ratio = std::max(row.max_ratio, r);
            // The proxy is exactly power-compatible at alpha = 1 and for q = inf.
            if (alpha == 1.0 || std::isinf(q)) {
              rep.unit_deviation = std::max(rep.unit_deviation, std::abs(r - 1.0));
            }
          }
          row.c_p_alpha = ConstantLedger::c_p_alpha(p, alpha);
          row.within_envelope = row.min_ratio >= 0.25 && row.max_ratio <= 4.0;
          row.within_constant = row.min_ratio >= 1.0 / row.c_p_alpha && row.max_ratio <= row.c_p_alpha;
          rep.min_ratio = std::min(rep.min_ratio, row.min_ratio);
          rep.max_ratio = std::max(rep.max_ratio, row.max_ratio);
          rep.all_within_envelope = rep.all_within_envelope && row.within_envelope;
          rep.rows.push_back(row);
        }
      }
    }
  }
  return rep;
}

}  // namespace nck
