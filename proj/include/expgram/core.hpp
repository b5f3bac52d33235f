#pragma once

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "expgram/coefficients.hpp"
#include "expgram/matrix.hpp"

namespace expgram {

/// Input pair (A, B) with an integration horizon t; the computed quantities
/// are e^{tA} and an upper-triangular U with U'U = G(tA, sqrt(t) B), the
/// controllability Gramian of (A, B) over [0, t].
struct Problem {
  Matrix<double> a;
  Matrix<double> b;
  double t = 1.0;
};

/// Padé order q and number of doublings s chosen for a problem.
struct OrderScaling {
  int q = 0;
  int s = 0;
};

struct ExpGramResult {
  Matrix<double> phi;        // approximates e^{tA}, n x n
  Matrix<double> u;          // upper triangular, nonnegative diagonal, n x n
  OrderScaling order_scaling;  // diagnostics
};

// Largest ||A_s||_1 for which the Gramian backward error stays below unit
// roundoff, per order (2 significant digits). Regenerable with the
// `derive-eta` CLI subcommand, which re-runs the underlying derivation.
inline constexpr double kEtaQ3 = 6.7e-4;
inline constexpr double kEtaQ5 = 2.1e-2;
inline constexpr double kEtaQ7 = 1.3e-1;
inline constexpr double kEtaQ9 = 4.1e-1;
inline constexpr double kEtaQ13 = 1.5e0;

inline double gramian_eta(int q) {
  switch (q) {
    case 3: return kEtaQ3;
    case 5: return kEtaQ5;
    case 7: return kEtaQ7;
    case 9: return kEtaQ9;
    case 13: return kEtaQ13;
    default:
      throw std::invalid_argument("gramian_eta: unsupported order");
  }
}

/// Reduces B to at most n columns. For m <= n this is the identity; for
/// m > n the transposed triangular QR factor of B' replaces B, which leaves
/// BB' (and hence the Gramian) unchanged.
inline Matrix<double> preprocess_b(const Matrix<double>& b) {
  if (b.cols() <= b.rows()) return b;
  return qr_upper(b.transposed()).transposed();
}

/// Selects the smallest order q in {3, 5, 7, 9} with ||tA||_1 <= eta_q and
/// n <= q+1 (then s = 0); otherwise falls back to q = 13 with enough
/// doublings for both the norm bound and the rank condition 2^s q >= n-1.
inline OrderScaling select_order_scaling(double a_norm, int n) {
  if (!(a_norm >= 0.0) || !std::isfinite(a_norm))
    throw std::invalid_argument(
        "select_order_scaling: norm must be finite and nonnegative");
  if (n < 1)
    throw std::invalid_argument("select_order_scaling: n must be positive");
  for (int q : {3, 5, 7, 9})
    if (a_norm <= gramian_eta(q) && n <= q + 1) return {q, 0};

  const double rank_ratio = static_cast<double>(n - 1) / 13.0;
  const double x = std::max(a_norm / kEtaQ13, rank_ratio);
  int s = 0;
  if (x > 1.0) s = static_cast<int>(std::ceil(std::log2(x)));
  if (s < 0) s = 0;
  // Floating-point log2 can land one step short of the required bound.
  while (std::ldexp(a_norm, -s) > kEtaQ13) ++s;
  while (static_cast<double>(n - 1) > 13.0 * std::ldexp(1.0, s)) ++s;
  return {13, s};
}

namespace detail {

inline std::vector<Matrix<double>> even_power_ladder(int q,
                                                     const Matrix<double>& a) {
  std::vector<Matrix<double>> powers;
  powers.push_back(Matrix<double>::identity(a.rows()));
  powers.push_back(a * a);
  const std::size_t count = required_even_powers(q);
  while (powers.size() < count) powers.push_back(powers.back() * powers[1]);
  return powers;
}

}  // namespace detail

/// Initial approximations at the scaled pair (A_s, B_s) with
/// ||A_s||_1 <= eta_q: phi0 is the diagonal Padé approximant D^{-1}(A_s)
/// N(A_s), and u0 is the triangular QR factor of the stacked Legendre
/// blocks after applying D^{-T} through the same LU factorization.
inline std::pair<Matrix<double>, Matrix<double>> initial_approx(
    const Matrix<double>& a_s, const Matrix<double>& b_s,
    const CoefficientSet& coeffs) {
  const auto powers = detail::even_power_ladder(coeffs.q, a_s);
  auto [num, den] = eval_pade_pair(coeffs, powers, a_s);
  LuFactorization<double> lu = [&] {
    try {
      return lu_factor(den);
    } catch (const std::runtime_error&) {
      throw std::runtime_error(
          "initial_approx: Padé denominator is singular; the input violates "
          "the scaling contract (corrupted data?)");
    }
  }();
  Matrix<double> phi0 = lu.solve(num);
  Matrix<double> stack = eval_legendre_stack(coeffs, powers, a_s, b_s);
  Matrix<double> u0 = qr_upper(lu.solve(stack.transposed()).transposed());
  return {phi0, u0};
}

/// One doubling step: the exponential squares and the Gramian factor is the
/// triangular QR factor of [u phi'; u], so u2'u2 = phi u'u phi' + u'u.
inline std::pair<Matrix<double>, Matrix<double>> double_once(
    const Matrix<double>& phi, const Matrix<double>& u) {
  if (phi.rows() != phi.cols())
    throw std::invalid_argument("double_once: phi must be square");
  if (u.cols() != phi.rows())
    throw std::invalid_argument("double_once: u column count mismatch");
  Matrix<double> u2 = qr_upper(vstack(u * phi.transposed(), u));
  return {phi * phi, u2};
}

/// Computes phi ~ e^{tA} and the upper-triangular factor u with
/// u'u ~ G(tA, sqrt(t) B) without ever forming the Gramian itself.
inline ExpGramResult exp_and_gram(const Problem& p) {
  const std::size_t n = p.a.rows();
  if (p.a.cols() != n)
    throw std::invalid_argument("exp_and_gram: A must be square");
  if (p.b.rows() != n)
    throw std::invalid_argument("exp_and_gram: B must have as many rows as A");
  if (!(p.t > 0.0) || !std::isfinite(p.t))
    throw std::invalid_argument("exp_and_gram: horizon must be positive");
  if (!all_finite(p.a) || !all_finite(p.b))
    throw std::invalid_argument("exp_and_gram: inputs must be finite");

  const Matrix<double> b_pre = preprocess_b(p.b);
  const Matrix<double> a1 = p.t * p.a;
  const Matrix<double> b1 = std::sqrt(p.t) * b_pre;

  const double a_norm = one_norm(a1);
  const OrderScaling os = select_order_scaling(a_norm, static_cast<int>(n));
  const Matrix<double> a_s = std::ldexp(1.0, -os.s) * a1;
  const Matrix<double> b_s = (1.0 / std::sqrt(std::ldexp(1.0, os.s))) * b1;

  const CoefficientSet& coeffs = load_coefficients(os.q);
  auto [phi, u] = initial_approx(a_s, b_s, coeffs);
  for (int k = 0; k < os.s; ++k) std::tie(phi, u) = double_once(phi, u);

  if (u.rows() < n) {
    Matrix<double> padded(n, n);
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) padded(i, j) = u(i, j);
    u = padded;
  }
  return {std::move(phi), std::move(u), os};
}

}  // namespace expgram
