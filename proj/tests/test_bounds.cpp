#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "expgram/bounds.hpp"
#include "expgram/core.hpp"
#include "test_support.hpp"

using expgram::BoundTable;
using expgram::MpReal;
using expgram::PrecisionSpec;
using expgram::Rational;

namespace {
const PrecisionSpec kPrec{120};
}

TEST_CASE("bound table sanity") {
  for (int q = 1; q <= 21; ++q) {
    CHECK(BoundTable::eta[q] < BoundTable::theta[q]);
    if (q > 1) CHECK(BoundTable::eta[q] > BoundTable::eta[q - 1]);
  }
  // the runtime constants are the printed table values
  CHECK(expgram::kEtaQ3 == BoundTable::eta[3]);
  CHECK(expgram::kEtaQ5 == BoundTable::eta[5]);
  CHECK(expgram::kEtaQ7 == BoundTable::eta[7]);
  CHECK(expgram::kEtaQ9 == BoundTable::eta[9]);
  CHECK(expgram::kEtaQ13 == BoundTable::eta[13]);
}

TEST_CASE("shifted Legendre polynomials") {
  auto p1 = expgram::shifted_legendre_coeffs(1);
  CHECK(p1 == std::vector<Rational>{Rational(-1), Rational(2)});
  auto p2 = expgram::shifted_legendre_coeffs(2);
  CHECK(p2 == std::vector<Rational>{Rational(1), Rational(-6), Rational(6)});
  auto p3 = expgram::shifted_legendre_coeffs(3);
  CHECK(p3 == std::vector<Rational>{Rational(-1), Rational(12), Rational(-30),
                                    Rational(20)});
  // P_k(1) = 1
  for (int k = 0; k <= 13; ++k) {
    Rational sum(0);
    for (const auto& c : expgram::shifted_legendre_coeffs(k)) sum += c;
    CHECK(sum == 1);
  }
}

TEST_CASE("legendre zeros are the roots of the polynomial") {
  expgram::ScopedPrecision guard(kPrec);
  for (int q : {1, 3, 9}) {
    auto zeros = expgram::legendre_zeros_01(q);
    REQUIRE(zeros.size() == static_cast<std::size_t>(q));
    auto coeffs = expgram::shifted_legendre_coeffs(q);
    for (const auto& z : zeros) {
      CHECK(z > 0);
      CHECK(z < 1);
      MpReal val(0);
      for (std::size_t i = coeffs.size(); i-- > 0;)
        val = val * z + MpReal(coeffs[i]);
      CHECK(abs(val) < pow(MpReal(10), -100));
    }
  }
  auto z1 = expgram::legendre_zeros_01(1);
  CHECK(abs(z1[0] - MpReal(Rational(1, 2))) < pow(MpReal(10), -100));
}

TEST_CASE("psi series leading terms") {
  // leading coefficient is constant (-1)^{q+1} q!/(2q)!
  for (int q : {1, 2, 3, 5}) {
    auto series = expgram::psi_series(q, q + 5, kPrec);
    expgram::ScopedPrecision guard(kPrec);
    REQUIRE(series.coeff_polys.front().size() == 1);
    Rational pref(1);
    for (int i = q + 1; i <= 2 * q; ++i) pref /= i;
    if ((q + 1) % 2) pref = -pref;
    CHECK(abs(series.coeff_polys.front()[0] - MpReal(pref)) <
          pow(MpReal(10), -100));
    // degree of psi_n is exactly n-(q+1)
    for (std::size_t idx = 0; idx < series.coeff_polys.size(); ++idx) {
      REQUIRE(series.coeff_polys[idx].size() == idx + 1);
      CHECK(series.coeff_polys[idx].back() != 0);
    }
  }
}

TEST_CASE("q=3 reciprocal denominator series starts 1 + z/2 + 0.15 z^2") {
  auto series = expgram::psi_series(3, 7, kPrec);
  expgram::ScopedPrecision guard(kPrec);
  // psi_n(0) = pref * r_{n-q-1}; divide successive constants by psi_{q+1}(0)
  const MpReal r0 = series.coeff_polys[0][0];
  const MpReal r1 = series.coeff_polys[1][0] / r0;
  const MpReal r2 = series.coeff_polys[2][0] / r0;
  CHECK(abs(r1 - MpReal(Rational(1, 2))) < pow(MpReal(10), -100));
  CHECK(abs(r2 - MpReal(Rational(3, 20))) < pow(MpReal(10), -100));
}

TEST_CASE("vbar hand-checked case for q = 1") {
  auto series = expgram::psi_series(1, 6, kPrec);
  auto grid = expgram::make_grid(1, 2, kPrec);
  expgram::ScopedPrecision guard(kPrec);
  REQUIRE(grid.points.size() == 3);  // {0, 1/2, 1}
  auto table = expgram::vbar(series, grid);

  // V_2(t) = |t^2 - t| / 2: 0 at the endpoints, 1/8 at t = 1/2
  CHECK(table.values[0][0] == 0);
  CHECK(abs(table.values[0][1] - MpReal(Rational(1, 8))) <
        pow(MpReal(10), -100));
  CHECK(abs(table.values[0][2]) < pow(MpReal(10), -100));
}

TEST_CASE("beta_hat is zero at zero and monotone") {
  auto series = expgram::psi_series(3, 40, kPrec);
  auto grid = expgram::make_grid(3, 2, kPrec);
  expgram::ScopedPrecision guard(kPrec);
  auto table = expgram::vbar(series, grid);
  CHECK(expgram::beta_hat(table, MpReal(0)) == 0);

  std::mt19937_64 rng(test_support::kSeed + 40);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    double x = unif(rng), y = unif(rng);
    if (x > y) std::swap(x, y);
    CHECK(expgram::beta_hat(table, MpReal(x)) <=
          expgram::beta_hat(table, MpReal(y)));
  }
}

TEST_CASE("beta_hat brackets the table threshold at q = 3") {
  auto series = expgram::psi_series(3, 150, kPrec);
  auto grid = expgram::make_grid(3, 2, kPrec);
  expgram::ScopedPrecision guard(kPrec);
  auto table = expgram::vbar(series, grid);
  const MpReal u = ldexp(MpReal(1), -53);
  CHECK(expgram::beta_hat(table, MpReal(6.7e-4)) <= u);
  CHECK(expgram::beta_hat(table, MpReal(2 * 6.7e-4)) > u);
}

TEST_CASE("derived eta values reproduce the table to two digits") {
  // Spot checks; the acceptance suite covers the full runtime order set.
  for (int q : {3, 5, 9}) {
    const double eta = expgram::find_eta(q, kPrec);
    const double table = BoundTable::eta[q];
    INFO("q=" << q << " derived=" << eta << " table=" << table);
    // within one unit of the second significant digit
    CHECK(eta >= table * 0.99);
    CHECK(eta <= table * 1.16);
  }
}

TEST_CASE("derived eta is stable in the grid refinement p", "[slow]") {
  const double e2 = expgram::find_eta(5, kPrec, 150, 2);
  const double e64 = expgram::find_eta(5, kPrec, 150, 64);
  CHECK(std::abs(e2 - e64) <= 0.01 * e2);
}
