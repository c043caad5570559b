#pragma once

// Singular-number profiles mu(x) as nonincreasing step functions, with L_p,
// weak-L_p and K-functional evaluation.

#include <limits>
#include <map>
#include <span>
#include <vector>

#include "nck/matcore.hpp"

namespace nck {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Step {
  double value = 0.0;
  double width = 0.0;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Nonincreasing step function t -> mu_t, zero beyond total_width().
/// Steps are kept sorted by value (stable); zero-width steps are dropped.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<Step> steps);

  const std::vector<Step>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }
  double total_width() const noexcept;
  double top() const noexcept { return steps_.empty() ? 0.0 : steps_.front().value; }

  /// mu_t with right-open steps [start, start + width).
  double value_at(double t) const noexcept;

  /// Applies a nondecreasing map to every value (e.g. v -> v^{1/alpha}).
  template <typename F>
  Profile map_values(F&& f) const {
    std::vector<Step> out = steps_;
    for (Step& s : out) s.value = f(s.value);
    return Profile(std::move(out));
  }

  /// Merges adjacent equal values; the result represents the same function.
  Profile canonical() const;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::vector<Step> steps_;
};

/// Singular values of a with each step of the given width (trace weight).
Profile profile_of(const Matrix& a, double weight = 1.0);

/// Values of any ordering, each with the same width.
Profile profile_from_values(std::span<const double> values, double weight = 1.0);

Profile merge(std::span<const Profile> profiles);

/// (sum value^p width)^{1/p}; p = kInf gives the top value.
double lp_norm(const Profile& f, double p);

/// sup_t t^{1/p} mu_t, attained at step right endpoints.
double weak_lp(const Profile& f, double p);

/// Integral of mu^p over [0, T].
double integral_power(const Profile& f, double p, double T);

/// Integral of mu^q over [T, infinity).
double tail_power(const Profile& f, double q, double T);

/// Exact K_t(f; L_1, L_inf) = integral of mu over [0, t].
double k_exact_1_inf(const Profile& f, double t);

/// Holmstedt-type K_t(f; L_p, L_q) proxy; for q = inf it equals
/// (integral of mu^p over [0, t^p])^{1/p}.
double k_proxy(const Profile& f, double p, double q, double t);

/// Ratios K(f,p,q,t) / K(f^{1/alpha}, p alpha, q alpha, t^{1/alpha})^alpha.
std::vector<double> power_theorem_check(const Profile& f, double p, double q, double alpha,
                                        std::span<const double> t_grid);

/// Log-spaced grid of `count` points between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// Constants of the K-functional machinery. A_1 = 1 is exact; other A_p,
/// B_p and c_inf are configurable inputs.
struct ConstantLedger {
  std::map<double, double> A;  // A_p by p
  std::map<double, double> B;  // lower-Khintchine B_p of the variable model
  double default_A = 4.0;      // used for p not in A
  double default_B = 1.7320508075688772;
  double c_inf = 2.0;

  ConstantLedger() { A[1.0] = 1.0; }

  double A_p(double p) const;
  double B_p(double p) const;

  /// max(1, 2^{1/(p alpha) - 1}) * max(2^{alpha-1}, 2^{1-alpha})
  static double c_p_alpha(double p, double alpha);

  /// max(A_p (A_p^p B_p^p + 1)^{1/p}, 4 A_p)
  double C_p(double p) const;
};

}  // namespace nck
