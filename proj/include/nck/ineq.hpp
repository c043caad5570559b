#pragma once

// Constructive witnesses for four routine operator inequalities on PSD
// matrices, and randomized suites over them and over the power theorem.

#include <cstdint>
#include <string>
#include <vector>

#include "nck/matcore.hpp"
#include "nck/profile.hpp"

namespace nck {

struct Witness {
  Matrix matrix;
  std::string role;  // which construction step produced it
  bool partial_isometry = false;
  double isometry_defect = 0.0;  // ||w w^* w - w||_F when partial_isometry
};

struct WitnessReport {
  std::string item;  // "i" .. "iv"
  std::vector<Witness> witnesses;
  double violation = 0.0;           // most negative eigenvalue of the asserted PSD difference, normalized
  double contraction_excess = 0.0;  // max(0, ||w||_inf - 1)
  double isometry_defect = 0.0;     // max over partial isometries

  bool ok(double tol = 1e-8) const {
    return violation >= -tol && contraction_excess <= tol && isometry_defect <= 1e-9;
  }
};

/// a = c b c^* with c = a^{1/2} b^{-1/2} (pseudo-inverse). Throws KernelMismatch
/// when ker b is not inside ker a (the residual does not close).
WitnessReport witness_i(const Matrix& a, const Matrix& b, double tol = 1e-8);

/// a^2 <= u b^2 u^* with u the polar isometry of a^{1/2} b^{1/2}.
WitnessReport witness_ii(const Matrix& a, const Matrix& b, double tol = 1e-8);

/// (a + b)^alpha <= 2^{alpha-1} u (a^alpha + b^alpha) u^*, u = 1 on [1, 2],
/// doubling otherwise.
WitnessReport witness_iii(const Matrix& a, const Matrix& b, double alpha);

/// (a + b)^theta <= u a^theta u^* + v b^theta v^*.
WitnessReport witness_iv(const Matrix& a, const Matrix& b, double theta);

struct IneqTrial {
  std::string item;
  int trial = 0;
  Index dim = 0;
  double parameter = 0.0;  // alpha or theta, 0 for items i and ii
  WitnessReport report;
};

struct IneqSuiteReport {
  std::vector<IneqTrial> trials;
  int failures = 0;
  double worst_violation = 0.0;
  double worst_excess = 0.0;
  double sharpness_gap = 0.0;  // item iii at a = b = 1: |bound - lhs| / lhs
};

/// `trials` seeded random instances per item, dims 1..8.
IneqSuiteReport ineq_suite(int trials, std::uint64_t seed, double tol = 1e-8);

/// Random PSD matrix of the given rank (rank <= dim).
Matrix random_psd(Index dim, Index rank, std::mt19937_64& rng);

struct PowerRow {
  double p = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  int profile = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double c_p_alpha = 0.0;
  bool within_envelope = false;  // [1/4, 4]
  bool within_constant = false;  // [1/c, c]
};

struct PowerSuiteReport {
  std::vector<PowerRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double unit_deviation = 0.0;  // max |ratio - 1| over alpha = 1 or q = inf
  bool all_within_envelope = false;
};

/// Random profiles over the (p, q, alpha) grid.
PowerSuiteReport power_theorem_suite(std::uint64_t seed, int trials);

}  // namespace nck
