#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "expgram/coefficients.hpp"
#include "expgram/core.hpp"
#include "expgram/matrix.hpp"
#include "test_support.hpp"

using expgram::Matrix;
using expgram::Problem;

namespace {

Matrix<double> gram(const Matrix<double>& u) { return u.transposed() * u; }

// Closed-form scalar Gramian of (a, 1) over the unit interval.
double scalar_gram(double a) {
  if (a == 0.0) return 1.0;
  return std::expm1(2.0 * a) / (2.0 * a);
}

}  // namespace

TEST_CASE("preprocess_b passes narrow B through and compresses wide B") {
  Matrix<double> narrow(3, 2);
  narrow(0, 0) = 1.0;
  CHECK(expgram::preprocess_b(narrow) == narrow);

  Matrix<double> wide = {{1.0, 1.0}};
  Matrix<double> comp = expgram::preprocess_b(wide);
  REQUIRE(comp.rows() == 1);
  REQUIRE(comp.cols() == 1);
  CHECK_THAT(comp(0, 0), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-15));

  Matrix<double> zwide(1, 3);
  Matrix<double> zc = expgram::preprocess_b(zwide);
  REQUIRE(zc.cols() == 1);
  CHECK(zc(0, 0) == 0.0);
}

TEST_CASE("preprocess_b preserves BB' on random wide inputs") {
  std::mt19937_64 rng(test_support::kSeed + 20);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const std::size_t m = n + 1 + rng() % 4;
    Matrix<double> b = test_support::random_matrix(rng, n, m);
    Matrix<double> c = expgram::preprocess_b(b);
    REQUIRE(c.cols() == n);
    CHECK(test_support::rel_diff_1norm(c * c.transposed(),
                                       b * b.transposed()) < 1e-13);
  }
}

TEST_CASE("order selection follows the smallest-q rule") {
  auto os = expgram::select_order_scaling(0.01, 4);
  CHECK(os.q == 5);
  CHECK(os.s == 0);

  os = expgram::select_order_scaling(10.0, 20);
  CHECK(os.q == 13);
  CHECK(os.s == 3);

  os = expgram::select_order_scaling(0.0, 10);
  CHECK(os.q == 9);
  CHECK(os.s == 0);

  // Zero norm with a large dimension still honours the rank condition.
  os = expgram::select_order_scaling(0.0, 30);
  CHECK(os.q == 13);
  CHECK(os.s == 2);

  CHECK_THROWS_AS(expgram::select_order_scaling(
                      std::numeric_limits<double>::quiet_NaN(), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(expgram::select_order_scaling(
                      std::numeric_limits<double>::infinity(), 3),
                  std::invalid_argument);
}

TEST_CASE("order selection always satisfies its postconditions") {
  std::mt19937_64 rng(test_support::kSeed + 21);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double norm = std::pow(10.0, 6.0 * unif(rng) - 3.0);
    const int n = 1 + static_cast<int>(rng() % 40);
    auto os = expgram::select_order_scaling(norm, n);
    CHECK(std::ldexp(norm, -os.s) <= expgram::gramian_eta(os.q));
    CHECK((n <= os.q + 1 || os.q == 13));
    if (os.q == 13)
      CHECK(static_cast<double>(n - 1) <= 13.0 * std::ldexp(1.0, os.s));
  }
}

TEST_CASE("initial approximation at A = 0 reproduces BB'") {
  const auto& cs = expgram::load_coefficients(3);
  Matrix<double> a(2, 2);
  Matrix<double> b = {{1.0}, {0.0}};
  auto [phi0, u0] = expgram::initial_approx(a, b, cs);
  CHECK(phi0 == Matrix<double>::identity(2));
  REQUIRE(u0.rows() == 2);
  CHECK(u0(0, 0) == 1.0);
  CHECK(u0(0, 1) == 0.0);
  CHECK(u0(1, 0) == 0.0);
  CHECK(u0(1, 1) == 0.0);
}

TEST_CASE("initial approximation on scalars matches the closed form") {
  const auto& cs = expgram::load_coefficients(3);

  Matrix<double> a0 = {{0.0}};
  Matrix<double> b2 = {{2.0}};
  auto [phi0, u0] = expgram::initial_approx(a0, b2, cs);
  CHECK(phi0(0, 0) == 1.0);
  CHECK(u0(0, 0) == 2.0);

  Matrix<double> am = {{0.01}};
  Matrix<double> bm = {{1.0}};
  auto [phi, u] = expgram::initial_approx(am, bm, cs);
  const double expect = scalar_gram(0.01);  // 1.0100669...
  CHECK_THAT(expect, Catch::Matchers::WithinAbs(1.0100669, 1e-7));
  CHECK(std::abs(u(0, 0) * u(0, 0) - expect) / expect <= std::ldexp(1.0, -50));
  CHECK_THAT(phi(0, 0), Catch::Matchers::WithinRel(std::exp(0.01), 1e-15));
}

TEST_CASE("initial approximation scalar case across orders") {
  std::mt19937_64 rng(test_support::kSeed + 22);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int q : expgram::kSupportedOrders) {
    const auto& cs = expgram::load_coefficients(q);
    for (int trial = 0; trial < 25; ++trial) {
      const double a = expgram::gramian_eta(q) * unit(rng);
      auto [phi, u] = expgram::initial_approx(Matrix<double>{{a}},
                                              Matrix<double>{{1.0}}, cs);
      const double expect = scalar_gram(a);
      // backward error <= u; a few extra ulps accumulate in the evaluation
      CHECK(std::abs(u(0, 0) * u(0, 0) - expect) / expect <=
            std::ldexp(1.0, -48));
    }
  }
}

TEST_CASE("double_once satisfies the Gramian doubling identity") {
  Matrix<double> phi1 = {{1.0}};
  Matrix<double> u1 = {{1.0}};
  auto [phi2, u2] = expgram::double_once(phi1, u1);
  CHECK(phi2(0, 0) == 1.0);
  CHECK_THAT(u2(0, 0), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-15));

  // exact half-interval scalar values reproduce the full-interval Gramian
  const double a = 1.0;
  Matrix<double> phi_h = {{std::exp(a / 2.0)}};
  Matrix<double> u_h = {{std::sqrt(0.5 * std::expm1(a) / a)}};
  auto [phi_f, u_f] = expgram::double_once(phi_h, u_h);
  CHECK_THAT(phi_f(0, 0), Catch::Matchers::WithinRel(std::exp(a), 1e-15));
  CHECK_THAT(u_f(0, 0),
             Catch::Matchers::WithinRel(std::sqrt(scalar_gram(a)), 1e-15));

  Matrix<double> zero_u(1, 1);
  auto [p3, u3] = expgram::double_once(phi_h, zero_u);
  CHECK(u3(0, 0) == 0.0);
  CHECK_THAT(p3(0, 0), Catch::Matchers::WithinRel(std::exp(a), 1e-15));
}

TEST_CASE("double_once matches phi G phi' + G on random factors") {
  std::mt19937_64 rng(test_support::kSeed + 23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t r = 1 + rng() % n;
    Matrix<double> phi = test_support::random_matrix(rng, n, n);
    Matrix<double> u = test_support::random_matrix(rng, r, n);
    auto [phi2, u2] = expgram::double_once(phi, u);
    REQUIRE(u2.rows() == std::min(2 * r, n));
    Matrix<double> g = gram(u);
    Matrix<double> expect = phi * g * phi.transposed() + g;
    CHECK(expgram::one_norm(gram(u2) - expect) <=
          1e-13 * std::max(1.0, expgram::one_norm(expect)));
  }
}

TEST_CASE("exp_and_gram trivial and scalar examples") {
  Matrix<double> a0(2, 2);
  auto res = expgram::exp_and_gram({a0, Matrix<double>::identity(2), 1.0});
  CHECK(res.phi == Matrix<double>::identity(2));
  CHECK(res.u == Matrix<double>::identity(2));

  auto scalar = expgram::exp_and_gram({{{1.0}}, {{1.0}}, 1.0});
  CHECK_THAT(scalar.phi(0, 0),
             Catch::Matchers::WithinAbs(2.718281828459045, 1e-14));
  const double g = scalar.u(0, 0) * scalar.u(0, 0);
  CHECK_THAT(g, Catch::Matchers::WithinAbs(3.194528049465325, 1e-14));
}

TEST_CASE("exp_and_gram on the 2x2 chain matches the hand integral") {
  Matrix<double> a = {{0.0, 0.0}, {1.0, 0.0}};
  Matrix<double> b = {{1.0}, {0.0}};
  auto res = expgram::exp_and_gram({a, b, 1.0});
  Matrix<double> g_exact = {{1.0, 0.5}, {0.5, 1.0 / 3.0}};
  Matrix<double> u_exact = {{1.0, 0.5}, {0.0, 1.0 / std::sqrt(12.0)}};
  CHECK(test_support::rel_diff_1norm(gram(res.u), g_exact) < 1e-15);
  CHECK(test_support::rel_diff_1norm(res.u, u_exact) < 1e-15);
}

TEST_CASE("exp_and_gram validates input") {
  Matrix<double> a(2, 2), b(2, 1);
  CHECK_THROWS_AS(expgram::exp_and_gram({a, b, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(expgram::exp_and_gram({a, b, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(expgram::exp_and_gram({a, Matrix<double>(3, 1), 1.0}),
                  std::invalid_argument);
  Matrix<double> bad = a;
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(expgram::exp_and_gram({bad, b, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("horizon handling is the same code path bitwise") {
  std::mt19937_64 rng(test_support::kSeed + 24);
  for (double t : {0.3, 1.7, 4.0}) {
    const std::size_t n = 4;
    Matrix<double> a = test_support::random_matrix(rng, n, n);
    Matrix<double> b = test_support::random_matrix(rng, n, 2);
    auto direct = expgram::exp_and_gram({a, b, t});
    auto scaled = expgram::exp_and_gram(
        {t * a, std::sqrt(t) * b, 1.0});
    CHECK(direct.phi == scaled.phi);
    CHECK(direct.u == scaled.u);
    CHECK(direct.order_scaling.q == scaled.order_scaling.q);
    CHECK(direct.order_scaling.s == scaled.order_scaling.s);
  }
}

TEST_CASE("doubling consistency across the half problem") {
  std::mt19937_64 rng(test_support::kSeed + 25);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t m = 1 + rng() % n;
    Matrix<double> a = test_support::random_matrix_with_norm(
        rng, n, 0.999 * (0.01 + 0.99 * (rng() % 100) / 100.0));
    Matrix<double> b = test_support::random_matrix(rng, n, m);

    auto full = expgram::exp_and_gram({a, b, 1.0});
    auto half =
        expgram::exp_and_gram({0.5 * a, (1.0 / std::sqrt(2.0)) * b, 1.0});
    Matrix<double> gh = gram(half.u);
    Matrix<double> combined = gh + half.phi * gh * half.phi.transposed();
    CHECK(test_support::rel_diff_1norm(gram(full.u), combined) <= 1e-13);
  }
}

TEST_CASE("Gramian is equivariant under orthogonal similarity") {
  std::mt19937_64 rng(test_support::kSeed + 26);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    Matrix<double> a = test_support::random_matrix_with_norm(rng, n, 2.0);
    Matrix<double> b = test_support::random_matrix(rng, n, 2);
    Matrix<double> t = test_support::random_orthogonal(rng, n);

    auto base = expgram::exp_and_gram({a, b, 1.0});
    auto moved = expgram::exp_and_gram(
        {t * a * t.transposed(), t * b, 1.0});
    Matrix<double> lhs = t * gram(base.u) * t.transposed();
    CHECK(expgram::one_norm(lhs - gram(moved.u)) <=
          1e-13 * expgram::one_norm(gram(base.u)));
  }
}

TEST_CASE("u output is square upper triangular with nonnegative diagonal") {
  std::mt19937_64 rng(test_support::kSeed + 27);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 8;  // wide B exercises preprocessing
    Matrix<double> a = test_support::random_matrix(rng, n, n);
    Matrix<double> b = test_support::random_matrix(rng, n, m);
    auto res = expgram::exp_and_gram({a, b, 1.0});
    REQUIRE(res.u.rows() == n);
    REQUIRE(res.u.cols() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(res.u(i, i) >= 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(res.u(i, j) == 0.0);
    }
  }
}
