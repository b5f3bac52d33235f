#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "expgram/coefficients.hpp"
#include "expgram/matrix.hpp"
#include "expgram/precision.hpp"

namespace expgram {

/// Per-order norm thresholds, q = 1..21 (index 0 unused).
///   theta: largest ||A_s|| keeping the exponential's backward error below
///          unit roundoff; eta: same for the Gramian (derivable below);
///   nu:    analyticity radius of the Padé denominator, used as the
///          bisection bracket; xi: bound on ||D^{-1}(A_s)||. Values to two
///          significant digits.
struct BoundTable {
  static constexpr std::array<double, 22> theta = {
      0,      3.7e-8, 5.3e-4, 1.5e-2, 8.5e-2, 2.5e-1, 5.4e-1, 9.5e-1,
      1.5e0,  2.1e0,  2.8e0,  3.6e0,  4.5e0,  5.4e0,  6.3e0,  7.3e0,
      8.4e0,  9.4e0,  1.1e1,  1.2e1,  1.3e1,  1.4e1};
  static constexpr std::array<double, 22> eta = {
      0,      1.8e-8, 2.4e-5, 6.7e-4, 5.3e-3, 2.1e-2, 6.0e-2, 1.3e-1,
      2.4e-1, 4.1e-1, 6.2e-1, 8.9e-1, 1.2e0,  1.5e0,  1.9e0,  2.4e0,
      2.9e0,  3.4e0,  4.0e0,  4.6e0,  5.2e0,  5.8e0};
  static constexpr std::array<double, 22> nu = {
      0,      2.0e0,  3.5e0,  4.6e0,  6.0e0,  7.3e0,  8.7e0,  9.9e0,
      1.1e1,  1.3e1,  1.4e1,  1.5e1,  1.7e1,  1.8e1,  1.9e1,  2.1e1,
      2.2e1,  2.3e1,  2.5e1,  2.6e1,  2.7e1,  2.8e1};
  static constexpr std::array<double, 22> xi = {
      0,      1.0e0,  1.0e0,  1.0e0,  1.0e0,  1.1e0,  1.3e0,  1.6e0,
      2.1e0,  3.0e0,  4.3e0,  6.6e0,  1.0e1,  1.7e1,  3.0e1,  5.3e1,
      9.8e1,  1.9e2,  3.8e2,  8.3e2,  2.0e3,  6.2e3};
};

inline void check_bound_order(int q) {
  if (q < 1 || q > 21)
    throw std::invalid_argument("bounds: order must be in 1..21");
}

/// Coefficients of the auxiliary series psi(t, eta) =
/// (q!/(2q)!) (-eta)^{q+1} D^{-1}(eta) e^{-eta t}, collected per power of
/// eta as polynomials in t. The series starts at eta^{q+1} and the n-th
/// coefficient polynomial has degree exactly n-(q+1).
struct PsiSeries {
  int q = 0;
  int max_order = 0;                           // N
  std::vector<std::vector<MpReal>> coeff_polys;  // [n-(q+1)] -> poly in t
};

/// Evaluation grid on [0, 1]: 0, 1 and the q zeros of the Legendre
/// polynomial, plus p-2 uniform interior points per subinterval for p > 2.
struct GridSpec {
  int q = 0;
  int p = 2;
  std::vector<MpReal> points;  // sorted, unique, subset of [0, 1]
};

/// Ascending integer coefficients of the shifted Legendre polynomial of
/// degree k on [0, 1] (normalized so P_k(1) = 1).
inline std::vector<Rational> shifted_legendre_coeffs(int k) {
  if (k < 0) throw std::invalid_argument("shifted_legendre_coeffs: k >= 0");
  // Bonnet recurrence (k+1) P_{k+1} = (2k+1)(2t-1) P_k - k P_{k-1}.
  std::vector<Rational> prev = {Rational(1)};
  if (k == 0) return prev;
  std::vector<Rational> cur = {Rational(-1), Rational(2)};
  for (int d = 1; d < k; ++d) {
    std::vector<Rational> next(d + 2, Rational(0));
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j + 1] += Rational(2 * (2 * d + 1)) * cur[j];
      next[j] -= Rational(2 * d + 1) * cur[j];
    }
    for (std::size_t j = 0; j < prev.size(); ++j)
      next[j] -= Rational(d) * prev[j];
    for (auto& c : next) c /= d + 1;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Zeros of the shifted Legendre polynomial on (0, 1), ascending, at the
/// current MPFR precision (Newton with the usual cosine initial guesses).
inline std::vector<MpReal> legendre_zeros_01(int q) {
  std::vector<MpReal> zeros(q);
  for (int i = 0; i < q; ++i) {
    MpReal x(std::cos(M_PI * (i + 0.75) / (q + 0.5)));  // root in [-1, 1]
    for (int it = 0; it < 200; ++it) {
      MpReal p0(1), p1 = x;
      for (int k = 2; k <= q; ++k) {
        MpReal p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      MpReal dp = MpReal(q) * (x * p1 - p0) / (x * x - MpReal(1));
      MpReal step = p1 / dp;
      x -= step;
      if (abs(step) < ldexp(MpReal(1), -3 * (int)MpReal::default_precision()))
        break;
    }
    zeros[q - 1 - i] = (x + MpReal(1)) / 2;  // descending cos -> ascending t
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

inline GridSpec make_grid(int q, int p, const PrecisionSpec& prec) {
  check_bound_order(q);
  if (p < 2) throw std::invalid_argument("make_grid: p >= 2");
  ScopedPrecision guard(prec);
  std::vector<MpReal> knots;
  knots.push_back(MpReal(0));
  for (auto& z : legendre_zeros_01(q)) knots.push_back(z);
  knots.push_back(MpReal(1));
  std::vector<MpReal> pts;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int j = 0; j < p - 1; ++j)
      pts.push_back(knots[i] +
                    (knots[i + 1] - knots[i]) * MpReal(j) / MpReal(p - 1));
  }
  pts.push_back(MpReal(1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return {q, p, std::move(pts)};
}

/// Builds the psi series by multiplying the monomial prefactor, the
/// reciprocal power series of the normalized Padé denominator and the
/// exponential series, truncated at order N. Works for any q in 1..21
/// through the exact-rational Padé coefficients.
inline PsiSeries psi_series(int q, int n_max, const PrecisionSpec& prec) {
  check_bound_order(q);
  if (n_max < q + 1) throw std::invalid_argument("psi_series: N >= q+1");
  ScopedPrecision guard(prec);

  const std::vector<BigInt> pade = pade_numerator_exact(q);
  // Normalized denominator d_j = (-1)^j pade[j]/pade[0]; reciprocal series
  // r solves sum_{i} d_i r_{k-i} = [k == 0].
  const int rlen = n_max - q;  // powers 0 .. N-(q+1)
  std::vector<MpReal> d(q + 1), r(rlen);
  for (int j = 0; j <= q; ++j) {
    d[j] = MpReal(Rational(pade[j], pade[0]));
    if (j % 2) d[j] = -d[j];
  }
  r[0] = 1;
  for (int k = 1; k < rlen; ++k) {
    MpReal s(0);
    for (int i = 1; i <= std::min(k, q); ++i) s += d[i] * r[k - i];
    r[k] = -s;
  }

  MpReal pref(1);  // q!/(2q)!
  for (int i = q + 1; i <= 2 * q; ++i) pref /= i;
  if ((q + 1) % 2) pref = -pref;

  std::vector<MpReal> inv_fact(rlen);
  inv_fact[0] = 1;
  for (int j = 1; j < rlen; ++j) inv_fact[j] = inv_fact[j - 1] / j;

  PsiSeries series;
  series.q = q;
  series.max_order = n_max;
  series.coeff_polys.resize(rlen);
  for (int n = q + 1; n <= n_max; ++n) {
    const int deg = n - (q + 1);
    std::vector<MpReal> poly(deg + 1);
    for (int j = 0; j <= deg; ++j) {
      MpReal c = pref * r[deg - j] * inv_fact[j];
      if (j % 2) c = -c;
      poly[j] = c;
    }
    series.coeff_polys[deg] = std::move(poly);
  }
  return series;
}

/// Table of V_n(t_i) = |integral_0^{t_i} psi_n(tau) P_q(tau) dtau|: each
/// product polynomial is integrated exactly (polynomial antiderivative) and
/// evaluated at the grid points.
struct VbarTable {
  int q = 0;
  int max_order = 0;
  std::vector<MpReal> points;
  std::vector<std::vector<MpReal>> values;  // [n-(q+1)][grid index]
};

inline VbarTable vbar(const PsiSeries& series, const GridSpec& grid) {
  if (series.q != grid.q)
    throw std::invalid_argument("vbar: series and grid order mismatch");
  const int q = series.q;
  const auto leg_rat = shifted_legendre_coeffs(q);
  std::vector<MpReal> leg(leg_rat.size());
  for (std::size_t i = 0; i < leg_rat.size(); ++i) leg[i] = MpReal(leg_rat[i]);

  VbarTable table;
  table.q = q;
  table.max_order = series.max_order;
  table.points = grid.points;
  table.values.resize(series.coeff_polys.size());
  for (std::size_t idx = 0; idx < series.coeff_polys.size(); ++idx) {
    const auto& psi = series.coeff_polys[idx];
    // product psi_n * P_q, then antiderivative (zero constant term)
    std::vector<MpReal> prod(psi.size() + leg.size() - 1);
    for (std::size_t i = 0; i < psi.size(); ++i)
      for (std::size_t j = 0; j < leg.size(); ++j) prod[i + j] += psi[i] * leg[j];
    std::vector<MpReal> anti(prod.size() + 1);
    for (std::size_t i = 0; i < prod.size(); ++i) anti[i + 1] = prod[i] / (i + 1);
    auto& row = table.values[idx];
    row.resize(grid.points.size());
    for (std::size_t g = 0; g < grid.points.size(); ++g) {
      const MpReal& t = grid.points[g];
      MpReal acc(0);
      for (std::size_t i = anti.size(); i-- > 0;) acc = acc * t + anti[i];
      row[g] = abs(acc);
    }
  }
  return table;
}

/// max over grid points of sum_n V_n(t_i) eta^n — a computable upper bound
/// for the backward-error driver sup_t ||V_t(A_s)|| at ||A_s|| = eta.
/// Monotone nondecreasing in eta since every V_n is nonnegative.
inline MpReal beta_hat(const VbarTable& table, const MpReal& eta) {
  if (eta < 0) throw std::invalid_argument("beta_hat: eta must be >= 0");
  const int q = table.q;
  MpReal best(0);
  for (std::size_t g = 0; g < table.points.size(); ++g) {
    MpReal power = pow(eta, q + 1);
    MpReal acc(0);
    for (std::size_t idx = 0; idx < table.values.size(); ++idx) {
      acc += table.values[idx][g] * power;
      power *= eta;
    }
    if (acc > best) best = acc;
  }
  return best;
}

/// Largest eta with beta_hat(eta) <= 2^-53, found by bisection over
/// (0, nu_q) to a relative width of 1e-6. This re-derives the runtime
/// eta_q constants.
inline double find_eta(int q, const PrecisionSpec& prec, int n_max = 150,
                       int p = 2) {
  check_bound_order(q);
  ScopedPrecision guard(prec);
  const PsiSeries series = psi_series(q, n_max, prec);
  const GridSpec grid = make_grid(q, p, prec);
  const VbarTable table = vbar(series, grid);

  const MpReal threshold = ldexp(MpReal(1), -53);
  MpReal lo(0), hi(BoundTable::nu[q]);
  if (beta_hat(table, hi) <= threshold) return hi.convert_to<double>();
  while (hi - lo > MpReal(1e-6) * hi) {
    MpReal mid = (lo + hi) / 2;
    if (beta_hat(table, mid) <= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return lo.convert_to<double>();
}

}  // namespace expgram
