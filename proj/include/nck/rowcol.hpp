#pragma once

// Row, column and Gaussian-type (G) operators on finite operator sequences.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nck/matcore.hpp"
#include "nck/profile.hpp"

namespace nck {

/// Finite sequence (x_1, ..., x_N) of d x d matrices.
struct OpSequence {
  Index dim = 0;
  std::vector<Matrix> items;

  OpSequence() = default;
  OpSequence(Index d, std::vector<Matrix> xs);

  std::size_t size() const noexcept { return items.size(); }
  const Matrix& operator[](std::size_t i) const { return items[i]; }
  Matrix& operator[](std::size_t i) { return items[i]; }

  /// Throws InvalidArgument unless N >= 1, all items are dim x dim and finite.
  void validate() const;

  static OpSequence zeros(Index d, std::size_t n);
};

OpSequence operator+(const OpSequence& a, const OpSequence& b);
OpSequence operator-(const OpSequence& a, const OpSequence& b);
OpSequence operator*(Complex s, const OpSequence& a);
/// (e x_i)
OpSequence operator*(const Matrix& e, const OpSequence& x);
/// (x_i f)
OpSequence operator*(const OpSequence& x, const Matrix& f);

/// (x_i^*)
OpSequence adjoint(const OpSequence& x);

/// max_i ||a_i - b_i||_F
double max_distance(const OpSequence& a, const OpSequence& b);

/// [x_1 ... x_N], d x Nd.
Matrix row_stack(const OpSequence& x);
/// [x_1; ...; x_N], Nd x d.
Matrix col_stack(const OpSequence& x);

OpSequence from_row_stack(const Matrix& r, Index d);
OpSequence from_col_stack(const Matrix& c, Index d);

/// sum x_i x_i^* = |(Rx)^*|^2
Matrix row_gram(const OpSequence& x);
/// sum x_i^* x_i = |Cx|^2
Matrix col_gram(const OpSequence& x);

/// Variable family xi in Gx = sum x_i (x) xi_i.
struct GModel {
  enum class Kind { Rademacher, HaarSurrogate };

  Kind kind = Kind::Rademacher;
  Index haar_dim = 0;
  std::uint64_t seed = 0;
  std::size_t enumeration_cap = 16;

  static GModel rademacher(std::size_t cap = 16) {
    GModel m;
    m.enumeration_cap = cap;
    return m;
  }
  static GModel haar(Index dim, std::uint64_t seed) {
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "haar surrogate dimension must be >= 1");
    GModel m;
    m.kind = Kind::HaarSurrogate;
    m.haar_dim = dim;
    m.seed = seed;
    return m;
  }

  /// "rademacher" or "haar_surrogate:D" (every surrogate figure carries this label).
  std::string label() const;
  bool is_surrogate() const noexcept { return kind == Kind::HaarSurrogate; }
};

/// sum_i x_i (x) U_i with seeded D x D Haar unitaries.
Matrix haar_block_sum(const OpSequence& x, Index haar_dim, std::uint64_t seed);

/// mu(Gx) with the normalized trace on the variable side: exact Rademacher
/// enumeration (2^N sign blocks of width 2^{-N}) or the Haar surrogate.
Profile g_profile(const OpSequence& x, const GModel& model);

/// Diagnostics for the row/column projection identities.
struct LemmaTrickReport {
  double commutator = 0.0;         // ||e|Rx*| - |Rx*|e|| / || |Rx*| ||
  double power_identity = 0.0;     // ||e |Rx*|^p - |R(ex)*|^p|| / scale
  double split_identity = 0.0;     // | ||Rx||_p^p - ||R(ex)||_p^p - ||R(e^perp x)||_p^p | / ||Rx||_p^p
  double column_excess = 0.0;      // max over f of max(0, ||C(fx)||_p - ||Cx||_p) / ||Cx||_p
  double deviation = 0.0;          // max of the above identity/inequality defects
};

/// Checks the projection identities for e commuting with |(Rx)^*|.
/// Throws NotCommuting if the commutator exceeds commute_tol.
LemmaTrickReport lemma_trick_check(const OpSequence& x, const Matrix& e, double p,
                                   std::span<const Matrix> column_projections = {},
                                   double commute_tol = 1e-8);

}  // namespace nck
