#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "expgram/core.hpp"
#include "expgram/matrix.hpp"
#include "expgram/precision.hpp"

namespace expgram {

// Reference solutions in extended precision. None of this is performance
// sensitive; everything favours being obviously correct over being fast.

namespace detail {

inline MpReal mp_pow10(int e) {
  return pow(MpReal(10), e);
}

}  // namespace detail

/// e^A by scaling, Taylor summation and repeated squaring, all in the
/// current MPFR precision. Terms are added until they drop below
/// 10^-(digits+10); for nilpotent inputs the series terminates and the
/// result is exact.
inline Matrix<MpReal> expm_reference_mp(const Matrix<MpReal>& a, int digits) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("expm_reference: matrix must be square");
  const std::size_t n = a.rows();
  const MpReal norm = one_norm(a);

  int k = 0;
  if (norm > MpReal(0.5)) {
    const double lg = std::log2(norm.convert_to<double>() * 2.0);
    k = std::max(0, static_cast<int>(std::ceil(lg)));
    while (norm > ldexp(MpReal(0.5), k)) ++k;
  }
  Matrix<MpReal> a_s = ldexp(MpReal(1), -k) * a;

  const MpReal tol = detail::mp_pow10(-(digits + 10));
  Matrix<MpReal> sum = Matrix<MpReal>::identity(n);
  Matrix<MpReal> term = Matrix<MpReal>::identity(n);
  const int max_terms = 16 * digits + 64;
  for (int j = 1; j <= max_terms; ++j) {
    term = term * a_s;
    term *= MpReal(1) / MpReal(j);
    sum += term;
    if (one_norm(term) < tol) break;
  }
  for (int i = 0; i < k; ++i) sum = sum * sum;
  return sum;
}

inline Matrix<MpReal> expm_reference(const Matrix<double>& a,
                                     const PrecisionSpec& prec) {
  ScopedPrecision guard(prec);
  return expm_reference_mp(to_mp(a), prec.decimal_digits);
}

/// Finite-horizon Gramian through the matrix fraction decomposition: the
/// (1,2) block of e^H with H = [[A, BB'], [0, -A']], multiplied by e^{A'},
/// then projected onto the symmetric matrices.
inline Matrix<MpReal> gramian_mfd(const Matrix<double>& a,
                                  const Matrix<double>& b,
                                  const PrecisionSpec& prec) {
  ScopedPrecision guard(prec);
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("gramian_mfd: dimension mismatch");
  const Matrix<MpReal> am = to_mp(a);
  const Matrix<MpReal> bm = to_mp(b);
  const Matrix<MpReal> bbt = bm * bm.transposed();

  Matrix<MpReal> h(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      h(i, j) = am(i, j);
      h(i, n + j) = bbt(i, j);
      h(n + i, n + j) = -am(j, i);
    }
  const Matrix<MpReal> eh = expm_reference_mp(h, prec.decimal_digits);
  Matrix<MpReal> m12(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m12(i, j) = eh(i, n + j);

  // The (2,2) block is e^{-A'}; its inverse is evaluated as e^{A'} rather
  // than by an extended-precision solve.
  Matrix<MpReal> g =
      m12 * expm_reference_mp(am.transposed(), prec.decimal_digits);
  Matrix<MpReal> sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sym(i, j) = (g(i, j) + g(j, i)) / MpReal(2);
  return sym;
}

/// Gauss-Legendre nodes and weights on [0, 1] at the current precision.
inline std::pair<std::vector<MpReal>, std::vector<MpReal>>
gauss_legendre_01(int nodes) {
  if (nodes < 1) throw std::invalid_argument("gauss_legendre_01: nodes >= 1");
  std::vector<MpReal> x(nodes), w(nodes);
  const MpReal one(1);
  for (int i = 0; i < nodes; ++i) {
    // Standard cosine initial guess, then Newton on P_n over [-1, 1].
    MpReal xi(std::cos(M_PI * (i + 0.75) / (nodes + 0.5)));
    for (int it = 0; it < 200; ++it) {
      MpReal p0(1), p1 = xi;
      for (int k = 2; k <= nodes; ++k) {
        MpReal p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (nodes == 1) { p1 = xi; p0 = one; }
      MpReal dp = MpReal(nodes) * (xi * p1 - p0) / (xi * xi - one);
      MpReal step = p1 / dp;
      xi -= step;
      if (abs(step) < ldexp(MpReal(1), -(int)MpReal::default_precision() * 3))
        break;
    }
    MpReal p0(1), p1 = xi;
    for (int k = 2; k <= nodes; ++k) {
      MpReal p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    MpReal dp = MpReal(nodes) * (xi * p1 - p0) / (xi * xi - one);
    x[i] = (xi + one) / 2;
    w[i] = one / ((one - xi * xi) * dp * dp);  // 2/((1-x^2)p'^2) scaled by 1/2
  }
  return {x, w};
}

/// Direct quadrature of the Gramian integral with `nodes` Gauss-Legendre
/// points; the integrand is evaluated through expm_reference. Serves as an
/// oracle independent of the matrix fraction decomposition.
inline Matrix<MpReal> gramian_quadrature(const Matrix<double>& a,
                                         const Matrix<double>& b,
                                         const PrecisionSpec& prec,
                                         int nodes) {
  if (nodes < 2) throw std::invalid_argument("gramian_quadrature: nodes >= 2");
  ScopedPrecision guard(prec);
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("gramian_quadrature: dimension mismatch");
  const Matrix<MpReal> am = to_mp(a);
  const Matrix<MpReal> bm = to_mp(b);
  auto [tau, weight] = gauss_legendre_01(nodes);
  Matrix<MpReal> g(n, n);
  for (int i = 0; i < nodes; ++i) {
    Matrix<MpReal> eb =
        expm_reference_mp(tau[i] * am, prec.decimal_digits) * bm;
    Matrix<MpReal> f = eb * eb.transposed();
    g += weight[i] * f;
  }
  return g;
}

/// Experiment test pair: A the lower shift matrix (nilpotent of index n),
/// B the first unit vector.
inline Problem integrator_pair(int n) {
  if (n < 1) throw std::invalid_argument("integrator_pair: n >= 1");
  Matrix<double> a(n, n), b(n, 1);
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  b(0, 0) = 1.0;
  return {std::move(a), std::move(b), 1.0};
}

/// Exact integrator Gramian, G_ij = 1/((i-1)!(j-1)!(i+j-1)), as rationals.
inline Matrix<Rational> integrator_gram_rational(int n) {
  std::vector<Rational> fact(n);
  fact[0] = 1;
  for (int i = 1; i < n; ++i) fact[i] = fact[i - 1] * i;
  Matrix<Rational> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = Rational(1) / (fact[i] * fact[j] * (i + j + 1));
  return g;
}

/// Row k holds the coefficient of the k-th shifted Legendre polynomial in
/// the expansion of t^j / j! (columns j = 0..n-1). With rows additionally
/// scaled by 1/sqrt(2k+1) this is the exact upper-triangular Cholesky
/// factor of the integrator Gramian.
inline Matrix<Rational> integrator_legendre_rows_rational(int n) {
  std::vector<Rational> fact(2 * n + 1);
  fact[0] = 1;
  for (int i = 1; i <= 2 * n; ++i) fact[i] = fact[i - 1] * i;
  Matrix<Rational> m(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = k; j < n; ++j)
      m(k, j) = Rational(2 * k + 1) * fact[j] / (fact[j - k] * fact[j + k + 1]);
  return m;
}

/// Closed-form (G, U) for the integrator pair in extended precision.
inline std::pair<Matrix<MpReal>, Matrix<MpReal>> integrator_closed_form(
    int n, const PrecisionSpec& prec) {
  ScopedPrecision guard(prec);
  const Matrix<Rational> g_rat = integrator_gram_rational(n);
  const Matrix<Rational> rows = integrator_legendre_rows_rational(n);
  Matrix<MpReal> g(n, n), scaled(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = MpReal(g_rat(i, j));
      scaled(i, j) = MpReal(rows(i, j)) / sqrt(MpReal(2 * i + 1));
    }
  return {std::move(g), qr_upper(scaled)};
}

/// Laguerre network pair: lower triangular A with -lambda on the diagonal
/// and -2 lambda below, B = sqrt(2 lambda) * ones. The identity solves the
/// associated algebraic Lyapunov equation, so G = I - e^A e^{A'}.
inline Problem laguerre_pair(int n, double lambda) {
  if (n < 1 || !(lambda > 0.0))
    throw std::invalid_argument("laguerre_pair: need n >= 1 and lambda > 0");
  Matrix<double> a(n, n), b(n, 1);
  for (int i = 0; i < n; ++i) {
    a(i, i) = -lambda;
    for (int j = 0; j < i; ++j) a(i, j) = -2.0 * lambda;
    b(i, 0) = std::sqrt(2.0 * lambda);
  }
  return {std::move(a), std::move(b), 1.0};
}

/// e^A for lower-triangular Toeplitz A. Such matrices form a commutative
/// algebra isomorphic to truncated power series in one variable, so the
/// exponential reduces to the series exponential of the first column:
/// f = exp(g) satisfies f_k = (1/k) sum_j j g_j f_{k-j}.
inline Matrix<MpReal> expm_lower_toeplitz_mp(const Matrix<MpReal>& a) {
  const std::size_t n = a.rows();
  std::vector<MpReal> c(n), e(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a(i, 0);
  e[0] = exp(c[0]);
  for (std::size_t k = 1; k < n; ++k) {
    MpReal s(0);
    for (std::size_t j = 1; j <= k; ++j) s += MpReal(j) * c[j] * e[k - j];
    e[k] = s / MpReal(k);
  }
  Matrix<MpReal> r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) r(i, j) = e[i - j];
  return r;
}

inline bool is_lower_toeplitz(const Matrix<double>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j > i && a(i, j) != 0.0) return false;
      if (j <= i && a(i, j) != a(i - j, 0)) return false;
    }
  return true;
}

/// Reference Gramian I - e^A e^{A'} for Laguerre-network inputs (valid for
/// any A whose algebraic Lyapunov equation is solved by the identity). The
/// exponential uses the Toeplitz series fast path when applicable.
inline Matrix<MpReal> laguerre_reference(const Matrix<double>& a,
                                         const PrecisionSpec& prec) {
  ScopedPrecision guard(prec);
  const std::size_t n = a.rows();
  if (a.cols() != n)
    throw std::invalid_argument("laguerre_reference: matrix must be square");
  const Matrix<MpReal> am = to_mp(a);
  const Matrix<MpReal> ea = is_lower_toeplitz(a)
                                ? expm_lower_toeplitz_mp(am)
                                : expm_reference_mp(am, prec.decimal_digits);
  Matrix<MpReal> g = Matrix<MpReal>::identity(n);
  const Matrix<MpReal> prod = ea * ea.transposed();
  g -= prod;
  return g;
}

/// [B | AB | ... | A^{n-1}B].
inline Matrix<double> controllability_matrix(const Matrix<double>& a,
                                             const Matrix<double>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("controllability_matrix: dimension mismatch");
  const std::size_t m = b.cols();
  Matrix<double> c(n, n * m);
  Matrix<double> block = b;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) c(i, k * m + j) = block(i, j);
    if (k + 1 < n) block = a * block;
  }
  return c;
}

/// Upper-triangular extended-precision Cholesky factor U with G = U'U.
inline Matrix<MpReal> mp_cholesky_upper(const Matrix<MpReal>& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n)
    throw std::invalid_argument("mp_cholesky_upper: matrix must be square");
  Matrix<MpReal> u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      MpReal s = g(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= u(k, i) * u(k, j);
      if (u(i, i) == 0) {
        if (s != 0)
          throw std::runtime_error(
              "mp_cholesky_upper: matrix not positive semidefinite at "
              "working precision");
        u(i, j) = 0;
      } else {
        u(i, j) = s / u(i, i);
      }
    }
    MpReal d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= u(k, j) * u(k, j);
    if (d < 0)
      throw std::runtime_error("mp_cholesky_upper: matrix not positive"
                               " semidefinite at working precision");
    u(j, j) = sqrt(d);
  }
  return u;
}

/// ||X - R||_1 / ||R||_1 with the difference accumulated in extended
/// precision; R = 0 falls back to the absolute norm.
inline double rel_error_1norm(const Matrix<double>& x,
                              const Matrix<MpReal>& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols())
    throw std::invalid_argument("rel_error_1norm: shape mismatch");
  Matrix<MpReal> diff = to_mp(x);
  diff -= ref;
  const MpReal denom = one_norm(ref);
  const MpReal num = one_norm(diff);
  if (denom == 0) return num.convert_to<double>();
  return (num / denom).convert_to<double>();
}

inline double rel_error_1norm_mp(const Matrix<MpReal>& x,
                                 const Matrix<MpReal>& ref) {
  Matrix<MpReal> diff = x;
  diff -= ref;
  const MpReal denom = one_norm(ref);
  const MpReal num = one_norm(diff);
  if (denom == 0) return num.convert_to<double>();
  return (num / denom).convert_to<double>();
}

}  // namespace expgram
