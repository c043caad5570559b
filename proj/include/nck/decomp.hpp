#pragma once

// Optimal row + column decomposition m_1(x) = min ||Ry||_1 + ||Cz||_1 over
// y + z = x, solved by Douglas-Rachford splitting with a dual certificate.

#include <span>
#include <vector>

#include "nck/profile.hpp"
#include "nck/rowcol.hpp"

namespace nck {

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 5000;
  std::size_t size_cap = 512;  // N * d
  int check_every = 10;
  int stagnation_window = 50;
};

struct DecompositionResult {
  OpSequence y;
  OpSequence z;
  double primal = 0.0;      // ||Ry||_1 + ||Cz||_1
  double dual_bound = 0.0;  // Re tr sum u_i^* x_i with max(||Ru||, ||Cu||) = 1
  double gap = 0.0;         // primal - dual_bound
  int iterations = 0;
  bool converged = false;   // false means max_iter was hit; diagnostics still valid
  double constraint_residual = 0.0;  // max_i ||y_i + z_i - x_i||_F
  OpSequence certificate;            // the dual element u
  SolverOptions options;

  double relative_gap() const { return primal > 0.0 ? gap / primal : gap; }
};

struct DualCertificate {
  OpSequence u;
  double bound = 0.0;
};

/// Douglas-Rachford on (Ry, Cz): blockwise singular-value soft-thresholding
/// followed by the averaging projection onto y_i + z_i = x_i.
/// Throws CapExceeded when N * d > options.size_cap.
DecompositionResult m1_solve(const OpSequence& x, const SolverOptions& options = {});

/// Rescales u so max(||Ru||_inf, ||Cu||_inf) = 1 and evaluates the weak-duality bound.
DualCertificate certificate_from(const OpSequence& x, OpSequence u);

/// Certificate from the polar subgradients of Ry and Cz, averaged blockwise.
DualCertificate dual_certificate(const OpSequence& x, const OpSequence& y, const OpSequence& z,
                                 double rank_tol = Tol::rank);

/// ||Ry||_1 + ||Cz||_1
double decomposition_value(const OpSequence& y, const OpSequence& z);

struct Truncation {
  OpSequence y;
  OpSequence z;
  Matrix e;  // 1_[A, inf)(|(Ry)*|)
  Matrix f;  // 1_[A, inf)(|Cz|)
};

/// y' = e^perp y f^perp + e x, z' = e^perp z f^perp + e^perp x f.
Truncation lemma36_truncate(const OpSequence& x, const OpSequence& y, const OpSequence& z,
                            double A);

struct DominationReport {
  std::vector<double> t;
  std::vector<double> row_ratio;  // K_t(Ry,1,inf) / K_t(Gx,1,inf)
  std::vector<double> col_ratio;  // K_t(Cz,1,inf) / K_t(Gx,1,inf)
  double sup_row = 0.0;
  double sup_col = 0.0;
  double sup() const { return std::max(sup_row, sup_col); }
};

/// Requires Rademacher-enumerable x (CapExceeded otherwise).
DominationReport k_domination_check(const OpSequence& x, const OpSequence& y,
                                    const OpSequence& z, std::span<const double> t_grid,
                                    const GModel& model = GModel::rademacher());

/// Default t-grid for K-functional comparisons on a profile of total width w.
std::vector<double> default_t_grid(double min_width, double total_width, int count = 48);

struct WeakKhintchineReport {
  double g_weak1 = 0.0;  // ||Gx||_{1,inf}
  double r_weak1 = 0.0;  // ||Ry||_{1,inf}
  double c_weak1 = 0.0;  // ||Cz||_{1,inf}
  double decomposition_value = 0.0;  // r_weak1 + c_weak1
  double ratio = 0.0;                // g_weak1 / decomposition_value
  double m1 = 0.0;
  double gap = 0.0;
};

WeakKhintchineReport weak_l1_khintchine(const OpSequence& x, const DecompositionResult& dec,
                                        const GModel& model = GModel::rademacher());
WeakKhintchineReport weak_l1_khintchine(const OpSequence& x, const SolverOptions& options = {});

}  // namespace nck
