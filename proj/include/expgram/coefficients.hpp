#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "expgram/matrix.hpp"

namespace expgram {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer coefficient tables for one Padé/Legendre order q.
///
/// pade_num holds the ascending-degree coefficients of the integer-scaled
/// Padé numerator; the denominator is recovered by sign alternation
/// (D(z) = N(-z)) and is never stored. Row k of leg_nums holds the
/// ascending-degree coefficients of the integer-scaled Legendre-coefficient
/// numerator polynomial for index k; sqr_norms[k] = 2k+1 is the reciprocal
/// square norm of the k-th Legendre polynomial on the unit interval.
struct CoefficientSet {
  int q = 0;
  std::vector<std::int64_t> pade_num;
  std::vector<std::vector<std::int64_t>> leg_nums;
  std::vector<std::int64_t> sqr_norms;
};

constexpr std::array<int, 5> kSupportedOrders = {3, 5, 7, 9, 13};

inline bool is_supported_order(int q) {
  for (int s : kSupportedOrders)
    if (s == q) return true;
  return false;
}

namespace detail {

inline CoefficientSet make_coefficients(int q) {
  CoefficientSet cs;
  cs.q = q;
  switch (q) {
    case 3:
      cs.pade_num = {120, 60, 12, 1};
      cs.leg_nums = {{120, 0, 2, 0},
                     {0, 60, 0, 0},
                     {0, 0, 10, 0},
                     {0, 0, 0, 1}};
      break;
    case 5:
      cs.pade_num = {30240, 15120, 3360, 420, 30, 1};
      cs.leg_nums = {{30240, 0, 840, 0, 2, 0},
                     {0, 15120, 0, 168, 0, 0},
                     {0, 0, 2520, 0, 10, 0},
                     {0, 0, 0, 252, 0, 0},
                     {0, 0, 0, 0, 18, 0},
                     {0, 0, 0, 0, 0, 1}};
      break;
    case 7:
      cs.pade_num = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
      cs.leg_nums = {{17297280, 0, 554400, 0, 3024, 0, 2, 0},
                     {0, 8648640, 0, 133056, 0, 324, 0, 0},
                     {0, 0, 1441440, 0, 11880, 0, 10, 0},
                     {0, 0, 0, 144144, 0, 616, 0, 0},
                     {0, 0, 0, 0, 10296, 0, 18, 0},
                     {0, 0, 0, 0, 0, 572, 0, 0},
                     {0, 0, 0, 0, 0, 0, 26, 0},
                     {0, 0, 0, 0, 0, 0, 0, 1}};
      break;
    case 9:
      cs.pade_num = {17643225600, 8821612800, 2075673600, 302702400, 30270240,
                     2162160, 110880, 3960, 90, 1};
      cs.leg_nums = {
          {17643225600, 0, 605404800, 0, 4324320, 0, 7920, 0, 2, 0},
          {0, 8821612800, 0, 155675520, 0, 617760, 0, 528, 0, 0},
          {0, 0, 1470268800, 0, 15444000, 0, 34320, 0, 10, 0},
          {0, 0, 0, 147026880, 0, 960960, 0, 1092, 0, 0},
          {0, 0, 0, 0, 10501920, 0, 42120, 0, 18, 0},
          {0, 0, 0, 0, 0, 583440, 0, 1320, 0, 0},
          {0, 0, 0, 0, 0, 0, 26520, 0, 26, 0},
          {0, 0, 0, 0, 0, 0, 0, 1020, 0, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 34, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 1}};
      break;
    case 13:
      cs.pade_num = {64764752532480000,
                     32382376266240000,
                     7771770303897600,
                     1187353796428800,
                     129060195264000,
                     10559470521600,
                     670442572800,
                     33522128640,
                     1323241920,
                     40840800,
                     960960,
                     16380,
                     182,
                     1};
      cs.leg_nums = {
          {64764752532480000, 0, 2374707592857600, 0, 21118941043200, 0,
           67044257280, 0, 81681600, 0, 32760, 0, 2, 0},
          {0, 32382376266240000, 0, 647647525324800, 0, 3620389893120, 0,
           7449361920, 0, 5569200, 0, 1080, 0, 0},
          {0, 0, 5397062711040000, 0, 69390806284800, 0, 260727667200, 0,
           352716000, 0, 153000, 0, 10, 0},
          {0, 0, 0, 539706271104000, 0, 4797389076480, 0, 12443820480, 0,
           10852800, 0, 2380, 0, 0},
          {0, 0, 0, 0, 38550447936000, 0, 245321032320, 0, 439538400, 0,
           232560, 0, 18, 0},
          {0, 0, 0, 0, 0, 2141691552000, 0, 9884730240, 0, 11938080, 0, 3344,
           0, 0},
          {0, 0, 0, 0, 0, 0, 97349616000, 0, 324498720, 0, 248976, 0, 26, 0},
          {0, 0, 0, 0, 0, 0, 0, 3744216000, 0, 8809920, 0, 3780, 0, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 124807200, 0, 197064, 0, 34, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 3670800, 0, 3496, 0, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 96600, 0, 42, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2300, 0, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 50, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}};
      break;
    default:
      throw std::invalid_argument("load_coefficients: unsupported order " +
                                  std::to_string(q));
  }
  cs.sqr_norms.resize(q + 1);
  for (int k = 0; k <= q; ++k) cs.sqr_norms[k] = 2 * k + 1;
  return cs;
}

}  // namespace detail

/// Returns the coefficient table for q in {3, 5, 7, 9, 13}.
inline const CoefficientSet& load_coefficients(int q) {
  static const CoefficientSet q3 = detail::make_coefficients(3);
  static const CoefficientSet q5 = detail::make_coefficients(5);
  static const CoefficientSet q7 = detail::make_coefficients(7);
  static const CoefficientSet q9 = detail::make_coefficients(9);
  static const CoefficientSet q13 = detail::make_coefficients(13);
  switch (q) {
    case 3: return q3;
    case 5: return q5;
    case 7: return q7;
    case 9: return q9;
    case 13: return q13;
    default:
      throw std::invalid_argument("load_coefficients: unsupported order " +
                                  std::to_string(q));
  }
}

/// Exact integer numerator coefficients of the diagonal Padé approximant of
/// e^z, any order q >= 1: coefficient j is (2q-j)! / (j! (q-j)!). For
/// q in {3,5,7,9,13} this reproduces pade_num bit-exactly.
inline std::vector<BigInt> pade_numerator_exact(int q) {
  if (q < 1) throw std::invalid_argument("pade_numerator_exact: q must be >= 1");
  auto factorial = [](int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  std::vector<BigInt> c(q + 1);
  for (int j = 0; j <= q; ++j)
    c[j] = factorial(2 * q - j) / (factorial(j) * factorial(q - j));
  return c;
}

namespace detail {

// (q+1)/2 + 1 even powers are needed for q <= 9 (linear combinations of
// I, A^2, ..., A^{q-1}); q = 13 uses the split evaluation with I, A^2, A^4,
// A^6 only.
inline std::size_t required_even_powers(int q) {
  return q == 13 ? 4 : static_cast<std::size_t>((q + 1) / 2) + 1;
}

template <typename T>
void check_even_powers(const CoefficientSet& cs,
                       const std::vector<Matrix<T>>& powers,
                       const Matrix<T>& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("coefficient evaluation: A must be square");
  if (powers.size() < required_even_powers(cs.q))
    throw std::invalid_argument(
        "coefficient evaluation: missing even powers for this order");
  for (const auto& p : powers)
    if (p.rows() != a.rows() || p.cols() != a.cols())
      throw std::invalid_argument(
          "coefficient evaluation: even power dimension mismatch");
}

// c0*P[0] + c1*P[1] + ... for ascending even-power coefficients.
template <typename T>
Matrix<T> combine(const std::vector<Matrix<T>>& powers,
                  const std::vector<std::pair<std::size_t, std::int64_t>>& terms) {
  Matrix<T> acc(powers[0].rows(), powers[0].cols());
  for (const auto& [idx, c] : terms) {
    if (c == 0) continue;
    const Matrix<T>& p = powers[idx];
    const T coef = T(c);
    for (std::size_t i = 0; i < acc.rows(); ++i)
      for (std::size_t j = 0; j < acc.cols(); ++j)
        acc(i, j) += coef * p(i, j);
  }
  return acc;
}

}  // namespace detail

/// Evaluates the integer-scaled Padé numerator N(A) and denominator
/// D(A) = N(-A) from precomputed even powers [I, A^2, A^4, ...], as
/// even(A) +/- A*odd(A) with a single multiplication by A. The even-power
/// ladder plus that one product matches the multiplication count of the
/// conventional scaling-and-squaring evaluation for every supported order.
template <typename T>
std::pair<Matrix<T>, Matrix<T>> eval_pade_pair(
    const CoefficientSet& cs, const std::vector<Matrix<T>>& powers,
    const Matrix<T>& a) {
  detail::check_even_powers(cs, powers, a);
  const auto& c = cs.pade_num;
  Matrix<T> even(a.rows(), a.cols()), odd_poly(a.rows(), a.cols());
  if (cs.q <= 9) {
    std::vector<std::pair<std::size_t, std::int64_t>> et, ot;
    for (int d = 0; d <= cs.q; d += 2) et.push_back({d / 2, c[d]});
    for (int d = 1; d <= cs.q; d += 2) ot.push_back({(d - 1) / 2, c[d]});
    even = detail::combine(powers, et);
    odd_poly = detail::combine(powers, ot);
  } else {
    // Order 13: split each part as low(A) + A^6 * high(A) so only the powers
    // I, A^2, A^4, A^6 are formed.
    const Matrix<T>& a6 = powers[3];
    Matrix<T> odd_high = detail::combine<T>(powers, {{1, c[9]}, {2, c[11]}, {3, c[13]}});
    Matrix<T> odd_low = detail::combine<T>(powers, {{0, c[1]}, {1, c[3]}, {2, c[5]}, {3, c[7]}});
    odd_poly = a6 * odd_high + odd_low;
    Matrix<T> even_high = detail::combine<T>(powers, {{1, c[8]}, {2, c[10]}, {3, c[12]}});
    Matrix<T> even_low = detail::combine<T>(powers, {{0, c[0]}, {1, c[2]}, {2, c[4]}, {3, c[6]}});
    even = a6 * even_high + even_low;
  }
  Matrix<T> a_odd = a * odd_poly;
  return {even + a_odd, even - a_odd};
}

/// Stacks the transposed Legendre-numerator blocks
/// [L_0(A)B | ... | L_k(A)B / sqrt(2k+1) | ...] into a (q+1)m x n matrix.
/// Even-k blocks are linear combinations of the products B, A^2 B, ...;
/// odd-k blocks get one extra multiplication by A. Applying D(A)^{-T} to the
/// result (one reused LU factorization) yields the initial Gramian factor.
template <typename T>
Matrix<T> eval_legendre_stack(const CoefficientSet& cs,
                              const std::vector<Matrix<T>>& powers,
                              const Matrix<T>& a, const Matrix<T>& b) {
  using std::sqrt;
  detail::check_even_powers(cs, powers, a);
  if (b.rows() != a.rows())
    throw std::invalid_argument("eval_legendre_stack: B row count mismatch");
  const int q = cs.q;
  const std::size_t n = a.rows(), m = b.cols();

  // w[j] = A^{2j} B, seeded from the stored even powers where available.
  std::vector<Matrix<T>> w;
  w.reserve(q / 2 + 1);
  w.push_back(b);
  for (int j = 1; j <= q / 2; ++j) {
    if (static_cast<std::size_t>(j) < powers.size())
      w.push_back(powers[j] * b);
    else
      w.push_back(powers[1] * w.back());
  }

  Matrix<T> stack((q + 1) * m, n);
  for (int k = 0; k <= q; ++k) {
    Matrix<T> block(n, m);
    for (int d = k % 2; d <= q; d += 2) {
      const std::int64_t c = cs.leg_nums[k][d];
      if (c == 0) continue;
      const Matrix<T>& wj = w[(d - k % 2) / 2];
      const T coef = T(c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < m; ++jj) block(i, jj) += coef * wj(i, jj);
    }
    if (k % 2 == 1) block = a * block;
    const T scale = T(1) / sqrt(T(cs.sqr_norms[k]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < m; ++jj)
        stack(k * m + jj, i) = scale * block(i, jj);
  }
  return stack;
}

namespace detail {

// Minimal exact polynomial helpers over the rationals (ascending degree).
using RatPoly = std::vector<Rational>;

inline void rp_trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_scaled(const RatPoly& p, const Rational& s) {
  RatPoly r = p;
  for (auto& c : r) c *= s;
  return r;
}

inline RatPoly rp_sum(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  rp_trim(r);
  return r;
}

// Multiplies by z.
inline RatPoly rp_shift(const RatPoly& p) {
  if (p.empty()) return {};
  RatPoly r(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i];
  return r;
}

// Divides by z; fails when the constant term is nonzero.
inline bool rp_div_z(const RatPoly& p, RatPoly& out) {
  if (!p.empty() && p[0] != 0) return false;
  out.assign(p.empty() ? 0 : p.size() - 1, Rational(0));
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i];
  rp_trim(out);
  return true;
}

}  // namespace detail

/// Independently re-derives the Legendre-coefficient polynomials from the
/// block tridiagonal Petrov-Galerkin system in exact rational arithmetic and
/// compares against a candidate table. The system (scalar indeterminate z,
/// unknowns scaled by the square norms) is solved by back substitution from
/// the last row; each step is an exact division by the monomial z.
inline bool verify_tables(const CoefficientSet& cs) {
  using detail::RatPoly;
  const int q = cs.q;
  if (q < 2 || cs.pade_num.size() != static_cast<std::size_t>(q + 1) ||
      cs.leg_nums.size() != static_cast<std::size_t>(q + 1))
    return false;
  for (const auto& row : cs.leg_nums)
    if (row.size() != static_cast<std::size_t>(q + 1)) return false;

  // March: row k of the system expresses y_{k-1} through y_k (and y_{k+1}
  // when the superdiagonal coupling is present, i.e. k <= q-2). Seed with
  // the monomial z^q for y_q; the scale is fixed afterwards.
  std::vector<RatPoly> y(q + 1);
  y[q] = RatPoly(q + 1, Rational(0));
  y[q][q] = 1;
  for (int k = q; k >= 1; --k) {
    RatPoly rhs = detail::rp_scaled(y[k], Rational(2));
    if (k <= q - 2)
      rhs = detail::rp_sum(rhs, detail::rp_scaled(detail::rp_shift(y[k + 1]),
                                                  Rational(1, 2 * k + 3)));
    RatPoly div;
    if (!detail::rp_div_z(rhs, div)) return false;
    y[k - 1] = detail::rp_scaled(div, Rational(2 * k - 1));
  }

  // The alternating sum of the solution ray reproduces the denominator;
  // matching leading coefficients rescales to the integer normalization.
  RatPoly delta;
  for (int k = 0; k <= q; ++k)
    delta = detail::rp_sum(delta, detail::rp_scaled(y[k], Rational(k % 2 ? -1 : 1)));
  RatPoly dq(q + 1, Rational(0));
  for (int j = 0; j <= q; ++j)
    dq[j] = Rational(cs.pade_num[j]) * (j % 2 ? -1 : 1);
  if (delta.size() != static_cast<std::size_t>(q + 1) || delta[q] == 0)
    return false;
  const Rational rho = dq[q] / delta[q];
  if (detail::rp_scaled(delta, rho) != dq) return false;

  for (int k = 0; k <= q; ++k) {
    RatPoly expect(q + 1, Rational(0));
    for (int j = 0; j <= q; ++j) expect[j] = Rational(cs.leg_nums[k][j]);
    detail::rp_trim(expect);
    if (detail::rp_scaled(y[k], rho) != expect) return false;
  }

  // Exact integer identities: column sums equal pade_num, the parity-zero
  // pattern holds, and sqr_norms[k] = 2k+1.
  for (int j = 0; j <= q; ++j) {
    std::int64_t sum = 0;
    for (int k = 0; k <= q; ++k) sum += cs.leg_nums[k][j];
    if (sum != cs.pade_num[j]) return false;
  }
  for (int k = 0; k <= q; ++k)
    for (int j = 0; j <= q; ++j)
      if ((j - k) % 2 != 0 && cs.leg_nums[k][j] != 0) return false;
  for (int k = 0; k <= q; ++k)
    if (cs.sqr_norms[k] != 2 * k + 1) return false;
  return true;
}

inline bool verify_tables(int q) { return verify_tables(load_coefficients(q)); }

}  // namespace expgram
