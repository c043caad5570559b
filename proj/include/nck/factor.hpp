#pragma once

// Factorization x = alpha u + u beta extracted from an optimal decomposition,
// the alpha/beta K-functional equivalence experiment and the commutator ratio.

#include <span>
#include <string>
#include <vector>

#include "nck/decomp.hpp"

namespace nck {

struct FactorizationResult {
  Matrix alpha;  // |(Ry)^*|
  Matrix beta;   // |Cz|
  OpSequence u;
  Matrix e;      // s(alpha)
  Matrix f;      // s(beta)
  double r_factor = 0.0;       // max_i ||x_i - alpha u_i - u_i beta||_F
  double r_consistency = 0.0;  // max_i ||v_i f - e w_i||_F
  double r_row = 0.0;          // violation of s(alpha) <= sum u u^* <= 1
  double r_col = 0.0;          // violation of s(beta) <= sum u^* u <= 1
  double r_y = 0.0;            // max_i ||alpha u_i - y_i||_F
  double r_z = 0.0;            // max_i ||u_i beta - z_i||_F
  double rank_tol = 0.0;
  double scale = 0.0;          // max_i ||x_i||_inf
};

/// alpha = (sum y y^*)^{1/2}, beta = (sum z^* z)^{1/2}, v_i = alpha^+ y_i,
/// w_i = z_i beta^+, u_i = v_i + (1 - e) w_i + (1 - e) c_i (1 - f) with c the
/// decomposition's dual certificate (when present). Supports are cut at
/// rank_tol * max(||alpha||, ||beta||). Throws DegenerateSupport when both
/// alpha and beta vanish but x does not.
FactorizationResult extract_factorization(const OpSequence& x, const DecompositionResult& dec,
                                          double rank_tol = 1e-8);

/// (y, z) -> ((y + z^*)/2, (z + y^*)/2) for self-adjoint x; keeps optimality
/// and makes beta = alpha.
DecompositionResult symmetrize(const OpSequence& x, const DecompositionResult& dec);

struct RatioBand {
  std::vector<double> t;
  std::vector<double> ratio;
  double min = 0.0;
  double max = 0.0;
  std::string label;        // model label, e.g. haar_surrogate:128
  bool in_hypothesis = false;
};

/// [K_t(alpha,p,inf) + K_t(beta,p,inf)] / K_t(Gx,p,inf) with the proxy K.
/// The comparison assumes the L_inf Khintchine hypothesis, which holds for
/// free Haar variables only, so Rademacher runs are flagged out of hypothesis.
RatioBand kt_alpha_equivalence(const OpSequence& x, const FactorizationResult& fac, double p,
                               std::span<const double> t_grid, const GModel& model);

/// K_{t^theta}(alpha^theta b + b beta^theta, p/theta, q/theta) divided by
/// K_t(alpha b + b beta, p, q)^theta ||b||^{1-theta}. Report only.
RatioBand commutator_k_ratio(const Matrix& alpha, const Matrix& beta, const Matrix& b,
                             double theta, double p, double q, std::span<const double> t_grid);

}  // namespace nck
