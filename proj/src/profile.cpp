#include "nck/profile.hpp"

#include <algorithm>
#include <cmath>

namespace nck {

Profile::Profile(std::vector<Step> steps) {
  for (const Step& s : steps) {
    if (!(s.width > 0.0) || !std::isfinite(s.width)) {
      if (s.width == 0.0) continue;
      throw Error(ErrorKind::InvalidArgument, "profile step width must be positive and finite");
    }
    if (!(s.value >= 0.0) || !std::isfinite(s.value)) {
      throw Error(ErrorKind::InvalidArgument, "profile step value must be finite and nonnegative");
    }
    steps_.push_back(s);
  }
  std::stable_sort(steps_.begin(), steps_.end(),
                   [](const Step& a, const Step& b) { return a.value > b.value; });
}

double Profile::total_width() const noexcept {
  double w = 0.0;
  for (const Step& s : steps_) w += s.width;
  return w;
}

double Profile::value_at(double t) const noexcept {
  double start = 0.0;
  for (const Step& s : steps_) {
    if (t < start + s.width) return s.value;
    start += s.width;
  }
  return 0.0;
}

Profile Profile::canonical() const {
  std::vector<Step> out;
  for (const Step& s : steps_) {
    if (!out.empty() && out.back().value == s.value) {
      out.back().width += s.width;
    } else {
      out.push_back(s);
    }
  }
  Profile p;
  p.steps_ = std::move(out);
  return p;
}

Profile profile_of(const Matrix& a, double weight) {
  if (!(weight > 0.0)) throw Error(ErrorKind::InvalidArgument, "profile weight must be positive");
  const RealVector s = singular_values(a);
  return profile_from_values(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())),
                             weight);
}

Profile profile_from_values(std::span<const double> values, double weight) {
  std::vector<Step> steps;
  steps.reserve(values.size());
  for (double v : values) steps.push_back({std::max(v, 0.0), weight});
  return Profile(std::move(steps));
}

Profile merge(std::span<const Profile> profiles) {
  std::vector<Step> pooled;
  for (const Profile& p : profiles) pooled.insert(pooled.end(), p.steps().begin(), p.steps().end());
  return Profile(std::move(pooled));
}

double lp_norm(const Profile& f, double p) {
  if (std::isinf(p)) return f.top();
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "lp_norm: p must be positive");
  double acc = 0.0;
  for (const Step& s : f.steps()) acc += std::pow(s.value, p) * s.width;
  return std::pow(acc, 1.0 / p);
}

double weak_lp(const Profile& f, double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "weak_lp: p must be positive");
  if (std::isinf(p)) return f.top();
  double best = 0.0;
  double end = 0.0;
  for (const Step& s : f.steps()) {
    end += s.width;
    best = std::max(best, std::pow(end, 1.0 / p) * s.value);
  }
  return best;
}

double integral_power(const Profile& f, double p, double T) {
  double acc = 0.0;
  double start = 0.0;
  for (const Step& s : f.steps()) {
    if (start >= T) break;
    const double w = std::min(s.width, T - start);
    acc += std::pow(s.value, p) * w;
    start += s.width;
  }
  return acc;
}

double tail_power(const Profile& f, double q, double T) {
  double acc = 0.0;
  double start = 0.0;
  for (const Step& s : f.steps()) {
    const double end = start + s.width;
    if (end > T) acc += std::pow(s.value, q) * (end - std::max(start, T));
    start = end;
  }
  return acc;
}

double k_exact_1_inf(const Profile& f, double t) { return integral_power(f, 1.0, t); }

double k_proxy(const Profile& f, double p, double q, double t) {
  if (!(p > 0.0) || !(q > p)) throw Error(ErrorKind::InvalidArgument, "k_proxy requires 0 < p < q");
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "k_proxy requires t > 0");
  if (std::isinf(q)) return std::pow(integral_power(f, p, std::pow(t, p)), 1.0 / p);
  const double r = 1.0 / (1.0 / p - 1.0 / q);
  const double split = std::pow(t, r);
  return std::pow(integral_power(f, p, split), 1.0 / p) +
         t * std::pow(tail_power(f, q, split), 1.0 / q);
}

std::vector<double> power_theorem_check(const Profile& f, double p, double q, double alpha,
                                        std::span<const double> t_grid) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  const Profile root = f.map_values([alpha](double v) { return std::pow(v, 1.0 / alpha); });
  const double q_root = std::isinf(q) ? kInf : q * alpha;
  std::vector<double> ratios;
  ratios.reserve(t_grid.size());
  for (double t : t_grid) {
    const double lhs = k_proxy(f, p, q, t);
    const double rhs = std::pow(k_proxy(root, p * alpha, q_root, std::pow(t, 1.0 / alpha)), alpha);
    ratios.push_back(rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : kInf));
  }
  return ratios;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count <= 0) return g;
  if (count == 1) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return g;
}

double ConstantLedger::A_p(double p) const {
  const auto it = A.find(p);
  return it == A.end() ? default_A : it->second;
}

double ConstantLedger::B_p(double p) const {
  const auto it = B.find(p);
  return it == B.end() ? default_B : it->second;
}

double ConstantLedger::c_p_alpha(double p, double alpha) {
  return std::max(1.0, std::pow(2.0, 1.0 / (p * alpha) - 1.0)) *
         std::max(std::pow(2.0, alpha - 1.0), std::pow(2.0, 1.0 - alpha));
}

double ConstantLedger::C_p(double p) const {
  const double a = A_p(p);
  const double b = B_p(p);
  return std::max(a * std::pow(std::pow(a, p) * std::pow(b, p) + 1.0, 1.0 / p), 4.0 * a);
}

}  // namespace nck
