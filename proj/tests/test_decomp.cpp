#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nck/decomp.hpp"
#include "nck/io.hpp"
#include "oracles.hpp"

using namespace nck;

namespace {

OpSequence e11_e12() { return sequence_from_json(read_json_file(NCK_TEST_DATA "/e11_e12.json")); }

double m1_value(const DecompositionResult& r) { return r.primal; }

}  // namespace

TEST_CASE("(e11, e12): value sqrt 2 and a closing certificate") {
  const OpSequence x = e11_e12();
  const DecompositionResult r = m1_solve(x);
  CHECK(r.converged);
  CHECK(r.primal == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(r.gap <= 1e-6);
  CHECK(r.gap >= -1e-9);
  CHECK(r.constraint_residual <= 1e-10);
  // u = x / sqrt 2 is the hand-computed certificate
  const DualCertificate hand = certificate_from(x, (1.0 / std::sqrt(2.0)) * x);
  CHECK(hand.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("N = 1: the value is the nuclear norm") {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const OpSequence x = gen.sequence(gen.integer(1, 5), 1);
    const DecompositionResult r = m1_solve(x);
    CHECK(r.primal == doctest::Approx(oracle::nuclear(x[0])).epsilon(1e-6));
    const DualCertificate c = dual_certificate(x, x, OpSequence::zeros(x.dim, 1));
    CHECK(c.bound == doctest::Approx(oracle::nuclear(x[0])).epsilon(1e-10));
  }
}

TEST_CASE("frozen reference values from an independent conic solver") {
  const Json ref = read_json_file(NCK_TEST_DATA "/m1_reference.json");
  for (const Json& c : ref.at("cases")) {
    const OpSequence x = sequence_from_json(c.at("sequence"));
    SolverOptions opt;
    opt.tol = 1e-9;
    opt.max_iter = 20000;
    const DecompositionResult r = m1_solve(x, opt);
    CHECK(r.primal == doctest::Approx(c.at("m1").get<double>()).epsilon(1e-6));
  }
}

TEST_CASE("scalar N = 2 instances against the grid oracle") {
  oracle::Gen gen(32);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.normal();
    const double b = gen.normal();
    const OpSequence x(1, {Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)});
    const DecompositionResult r = m1_solve(x);
    CHECK(std::abs(r.primal - oracle::m1_scalar_grid(a, b)) <= 1e-4);
  }
}

TEST_CASE("weak duality, feasibility, homogeneity and upper bounds") {
  oracle::Gen gen(33);
  for (int trial = 0; trial < 25; ++trial) {
    const Index d = gen.integer(1, 5);
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 4));
    const OpSequence x = gen.sequence(d, n);
    const DecompositionResult r = m1_solve(x);
    double scale = 0.0;
    for (const Matrix& m : x.items) scale = std::max(scale, oracle::opnorm(m));
    CHECK(r.dual_bound <= r.primal + 1e-9 * scale);
    CHECK(max_distance(r.y + r.z, x) <= 1e-9 * scale);
    CHECK(r.relative_gap() <= 1e-5);
    CHECK(r.primal <= oracle::nuclear(row_stack(x)) * (1.0 + 1e-6));
    CHECK(r.primal <= oracle::nuclear(col_stack(x)) * (1.0 + 1e-6));
    const DecompositionResult scaled = m1_solve(Complex(-2.5, 0.0) * x);
    CHECK(m1_value(scaled) == doctest::Approx(2.5 * r.primal).epsilon(1e-6));
    const DecompositionResult adj = m1_solve(adjoint(x));
    CHECK(adj.primal == doctest::Approx(r.primal).epsilon(1e-6));
  }
}

TEST_CASE("size cap") {
  oracle::Gen gen(34);
  SolverOptions opt;
  opt.size_cap = 8;
  bool capped = false;
  try {
    m1_solve(gen.sequence(3, 3), opt);
  } catch (const Error& e) {
    capped = e.kind() == ErrorKind::CapExceeded;
  }
  CHECK(capped);
}

TEST_CASE("max_iter exhaustion still returns diagnostics") {
  oracle::Gen gen(35);
  SolverOptions opt;
  opt.max_iter = 3;
  opt.tol = 1e-14;
  const DecompositionResult r = m1_solve(gen.sequence(3, 3), opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.primal > 0.0);
  CHECK(r.dual_bound <= r.primal);
}

TEST_CASE("truncation at A >= max(||Rx||_inf, ||Cx||_inf) never increases the objective") {
  oracle::Gen gen(36);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 4);
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 4));
    const OpSequence x = gen.sequence(d, n);
    // arbitrary feasible split, not optimal
    OpSequence y = x;
    for (Matrix& m : y.items) m = m * gen.uniform(0.0, 1.0) + gen.complex_matrix(d, d) * 0.3;
    const OpSequence z = x - y;
    const double reach = std::max(oracle::opnorm(row_stack(x)), oracle::opnorm(col_stack(x)));
    const double A = reach * gen.uniform(1.0, 1.5);
    const Truncation t = lemma36_truncate(x, y, z, A);
    double scale = 0.0;
    for (const Matrix& m : x.items) scale = std::max(scale, oracle::opnorm(m));
    CHECK(max_distance(t.y + t.z, x) <= 1e-12 * std::max(1.0, scale));
    CHECK(decomposition_value(t.y, t.z) <= decomposition_value(y, z) + 1e-9 * scale);
  }
}

TEST_CASE("truncation above all spectral data is the identity map") {
  oracle::Gen gen(37);
  const OpSequence x = gen.sequence(3, 2);
  const OpSequence y = 0.5 * x;
  const OpSequence z = x - y;
  const Truncation t = lemma36_truncate(x, y, z, 1e6);
  CHECK(max_distance(t.y, y) == 0.0);
  CHECK(max_distance(t.z, z) == 0.0);
}

TEST_CASE("truncation with z = 0 keeps the top spectral part of y") {
  oracle::Gen gen(38);
  const OpSequence x = gen.sequence(3, 2);
  const Matrix mod = psd_sqrt(row_gram(x));
  const RealVector ev = oracle::eigenvalues_desc(mod);
  const double A = 0.5 * (ev(0) + ev(1));
  const Truncation t = lemma36_truncate(x, x, OpSequence::zeros(3, 2), A);
  CHECK(oracle::opnorm(t.e) == doctest::Approx(1.0));
  CHECK(t.e.trace().real() == doctest::Approx(1.0));
  CHECK(max_distance(t.e * t.y, t.e * x) <= 1e-12);
  CHECK(oracle::opnorm(t.f) <= 1e-12);
}

TEST_CASE("truncation at A = ||Gx||_inf bounds the stacks by 2A") {
  oracle::Gen gen(39);
  for (int trial = 0; trial < 20; ++trial) {
    const OpSequence x = gen.sequence(gen.integer(1, 3), static_cast<std::size_t>(gen.integer(1, 4)));
    const DecompositionResult r = m1_solve(x);
    const double A = g_profile(x, GModel::rademacher()).top();
    const Truncation t = lemma36_truncate(x, r.y, r.z, A);
    CHECK(oracle::opnorm(row_stack(t.y)) <= 2.0 * A * (1.0 + 1e-8));
    CHECK(oracle::opnorm(col_stack(t.z)) <= 2.0 * A * (1.0 + 1e-8));
  }
}

TEST_CASE("K-domination: trivial N = 1 case and scaling") {
  oracle::Gen gen(40);
  const OpSequence x = gen.sequence(3, 1);
  const auto grid = default_t_grid(1.0, 3.0);
  const DominationReport d = k_domination_check(x, x, OpSequence::zeros(3, 1), grid);
  CHECK(d.sup_row <= 1.0 + 1e-12);
  CHECK(d.sup_col == 0.0);

  const OpSequence w = gen.sequence(2, 3);
  const DecompositionResult r = m1_solve(w);
  const DominationReport a = k_domination_check(w, r.y, r.z, grid);
  const DominationReport b = k_domination_check(Complex(3.0, 0.0) * w, Complex(3.0, 0.0) * r.y,
                                                Complex(3.0, 0.0) * r.z, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(b.row_ratio[k] == doctest::Approx(a.row_ratio[k]).epsilon(1e-12));
    CHECK(b.col_ratio[k] == doctest::Approx(a.col_ratio[k]).epsilon(1e-12));
  }
}

TEST_CASE("weak-L1 report: N = 1 and conjugation invariance") {
  oracle::Gen gen(41);
  const OpSequence one = gen.sequence(3, 1);
  const WeakKhintchineReport a = weak_l1_khintchine(one);
  CHECK(a.ratio >= 0.5);
  CHECK(a.ratio <= 2.0);

  const OpSequence x = gen.sequence(2, 3);
  const Matrix u = haar_unitary(2, 77);
  OpSequence conj = x;
  for (Matrix& m : conj.items) m = u * m * u.adjoint();
  SolverOptions opt;
  opt.tol = 1e-10;
  opt.max_iter = 20000;
  const WeakKhintchineReport p = weak_l1_khintchine(x, opt);
  const WeakKhintchineReport q = weak_l1_khintchine(conj, opt);
  CHECK(q.g_weak1 == doctest::Approx(p.g_weak1).epsilon(1e-10));
  CHECK(q.m1 == doctest::Approx(p.m1).epsilon(1e-8));
}

TEST_CASE("weak-L1 report on (e11, e12)") {
  const WeakKhintchineReport r = weak_l1_khintchine(e11_e12());
  // Gx takes the values s e11 + t e12 with |s| = |t| = 1: one singular value sqrt 2
  CHECK(r.g_weak1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.ratio > 0.25);
  CHECK(r.ratio < 4.0);
}
