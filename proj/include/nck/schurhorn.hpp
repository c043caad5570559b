#pragma once

// Schur-Horn realization by a chain of Givens rotations, and the two
// L_{2,inf} counterexample families built from it.

#include <cstdint>
#include <vector>

#include "nck/matcore.hpp"
#include "nck/profile.hpp"
#include "nck/rowcol.hpp"

namespace nck {

/// Target spectrum lambda and target diagonal, zero-padded to equal length.
struct MajorizationPair {
  RealVector lambda;
  RealVector diag;

  MajorizationPair() = default;
  MajorizationPair(RealVector lambda, RealVector diag);

  Index size() const noexcept { return lambda.size(); }
  double scale() const;

  /// max over n of (partial sum of diag, sorted) - (partial sum of lambda, sorted),
  /// together with the absolute trace mismatch. <= 0 up to rounding when lambda majorizes diag.
  double majorization_defect() const;
};

struct ChanLiResult {
  RealMatrix M;            // real symmetric, M = basis * diag(eigenvalues) * basis^T
  RealMatrix basis;        // orthogonal, tracked through every rotation
  RealVector eigenvalues;  // lambda in basis column order
  int rotations = 0;
  double diag_error = 0.0;       // max |M_kk - diag_k| / lambda_max
  double trace_drift = 0.0;      // |tr M - sum lambda| / lambda_max
  double frobenius_drift = 0.0;  // |||M||_F - ||lambda||_2| / lambda_max
};

/// Throws MajorizationViolated if the defect exceeds tol * scale and
/// NumericalBreakdown if a bracketing pair cannot be found.
ChanLiResult chan_li(const MajorizationPair& pair, double tol = 1e-10);

/// max |eig(M) - lambda| / lambda_max using the Jacobi eigensolver.
double spectrum_error(const ChanLiResult& r, const MajorizationPair& pair);

/// x_i = e_ii M^{1/2}, i = 1..n.
OpSequence build_x(const Matrix& M);
/// Same, with the root supplied by the Schur-Horn basis (no eigensolver call).
OpSequence build_x(const ChanLiResult& r);

/// Q sqrt(Lambda) Q^T from the tracked basis.
RealMatrix sqrt_from_basis(const ChanLiResult& r);

struct CounterexampleReport {
  int N = 0;
  int family = 0;
  Index size = 0;  // matrix dimension n (N for family 1, v_N for family 2)
  double g_weak2 = 0.0;
  double r_weak2 = 0.0;
  double c_weak2 = 0.0;
  double ratio = 0.0;
  bool verified = false;  // full spectral verification of M was run
  double diag_error = 0.0;
  double spectrum_error = 0.0;  // NaN when not verified
  double g_closed = 0.0;        // closed-form value for ||Gx||_{2,inf}
  double r_closed = 0.0;        // closed-form value for ||Rx||_{2,inf}
};

inline constexpr Index kVerifyCap = 512;

/// lambda = (H_N, 0, ..., 0), diag = (1, 1/2, ..., 1/N). ratio = g_weak2 / r_weak2.
CounterexampleReport family1(int N, Index verify_cap = kVerifyCap);
/// lambda = (floor(N/i))_i zero-padded to v_N, diag = 1. ratio = r_weak2 / g_weak2.
CounterexampleReport family2(int N, Index verify_cap = kVerifyCap);

double harmonic(int N);
long long divisor_sum_count(int N);  // v_N = sum_i floor(N/i)

/// Random pair with lambda majorizing diag: diag of a random orthogonal
/// conjugate of diag(lambda).
MajorizationPair random_majorizing_pair(Index n, std::uint64_t seed);

}  // namespace nck
