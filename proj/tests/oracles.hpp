#pragma once

// Reference computations that share no code with the library: Eigen's own
// decompositions, brute-force searches and closed forms.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "nck/matcore.hpp"
#include "nck/profile.hpp"
#include "nck/rowcol.hpp"

namespace oracle {

using nck::Complex;
using nck::Index;
using nck::Matrix;
using nck::RealVector;

inline RealVector eigenvalues_desc(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  RealVector v = es.eigenvalues().reverse();
  return v;
}

inline RealVector singulars_desc(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> s(a);
  return s.singularValues();
}

inline double nuclear(const Matrix& a) { return singulars_desc(a).sum(); }

inline double opnorm(const Matrix& a) {
  const RealVector s = singulars_desc(a);
  return s.size() ? s(0) : 0.0;
}

inline double lambda_min(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double lambda_max(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

// Seeded generators for the property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

  Matrix complex_matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = Complex(normal(), normal());
    return m;
  }

  Matrix real_matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = Complex(normal(), 0.0);
    return m;
  }

  Matrix hermitian(Index d) {
    const Matrix g = complex_matrix(d, d);
    return 0.5 * (g + g.adjoint());
  }

  Matrix psd(Index d, Index rank) {
    const Matrix g = complex_matrix(d, rank);
    return g * g.adjoint();
  }

  nck::OpSequence sequence(Index d, std::size_t n) {
    nck::OpSequence x(d, {});
    for (std::size_t i = 0; i < n; ++i) x.items.push_back(complex_matrix(d, d));
    return x;
  }

  nck::Profile profile(int steps) {
    std::vector<nck::Step> s;
    for (int i = 0; i < steps; ++i) s.push_back({std::exp(uniform(-2.0, 2.0)), uniform(0.05, 2.0)});
    return nck::Profile(s);
  }
};

// mu_t of a step profile evaluated from its raw steps.
inline std::vector<std::pair<double, double>> sorted_steps(const nck::Profile& f) {
  std::vector<std::pair<double, double>> s;
  for (const nck::Step& st : f.steps()) s.emplace_back(st.value, st.width);
  std::sort(s.begin(), s.end(), [](auto a, auto b) { return a.first > b.first; });
  return s;
}

// K_t(f; L_1, L_inf) = min over s >= 0 of ||(f - s)_+||_1 + t s. The objective
// is convex piecewise linear in s with kinks at the step values, so the
// minimum sits at one of them or at 0.
inline double k_1_inf_brute(const nck::Profile& f, double t) {
  const auto s = sorted_steps(f);
  auto objective = [&](double level) {
    double acc = t * level;
    for (auto [v, w] : s) acc += std::max(0.0, v - level) * w;
    return acc;
  };
  double best = objective(0.0);
  for (auto [v, w] : s) best = std::min(best, objective(v));
  return best;
}

// The same minimum by dense scan over the splitting level, g = min(f, s).
inline double k_1_inf_grid(const nck::Profile& f, double t, int points) {
  const auto s = sorted_steps(f);
  const double top = s.empty() ? 0.0 : s.front().first;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= points; ++k) {
    const double level = top * k / points;
    double acc = t * level;
    for (auto [v, w] : s) acc += std::max(0.0, v - level) * w;
    best = std::min(best, acc);
  }
  return best;
}

// m_1 for N = 2 scalar items: min over y in R^2 of |y|_2 + |x - y|_2, by a
// coarse-to-fine grid search over the plane.
inline double m1_scalar_grid(double x1, double x2) {
  auto value = [&](double y1, double y2) {
    return std::hypot(y1, y2) + std::hypot(x1 - y1, x2 - y2);
  };
  const double r = std::max({std::abs(x1), std::abs(x2), 1e-12});
  double c1 = 0.0;
  double c2 = 0.0;
  double span = 2.0 * r;
  double best = value(c1, c2);
  for (int level = 0; level < 12; ++level) {
    double b1 = c1;
    double b2 = c2;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double y1 = c1 + span * i / 20.0;
        const double y2 = c2 + span * j / 20.0;
        const double v = value(y1, y2);
        if (v < best) {
          best = v;
          b1 = y1;
          b2 = y2;
        }
      }
    }
    c1 = b1;
    c2 = b2;
    span /= 4.0;
  }
  return best;
}

inline double harmonic(int n) {
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

inline long long divisor_count_sum(int n) {
  // number of pairs (i, j) with i * j <= n
  long long c = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; i * j <= n; ++j) ++c;
  return c;
}

}  // namespace oracle
