#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace expgram {

/// Dense row-major matrix over an arbitrary real scalar type.
///
/// The double instantiation is the computational carrier for the whole
/// algorithm; extended-precision and rational instantiations are used by the
/// reference/oracle paths. Values are immutable in spirit: all algorithms
/// below are pure functions of their inputs.
template <typename T>
class Matrix {
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("Matrix: dimensions must be positive");
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw std::invalid_argument("Matrix: empty initializer");
    cols_ = rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw std::invalid_argument("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  Matrix transposed() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  void check_same_shape(const Matrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("Matrix::") + what +
                                  ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  a += b;
  return a;
}

template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  a -= b;
  return a;
}

template <typename T>
Matrix<T> operator*(const T& s, Matrix<T> m) {
  m *= s;
  return m;
}

template <typename T>
Matrix<T> operator*(Matrix<T> m, const T& s) {
  m *= s;
  return m;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("Matrix product: inner dimension mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <typename T>
Matrix<T> vstack(const Matrix<T>& top, const Matrix<T>& bottom) {
  if (top.cols() != bottom.cols())
    throw std::invalid_argument("vstack: column count mismatch");
  Matrix<T> m(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) m(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < bottom.cols(); ++j)
      m(top.rows() + i, j) = bottom(i, j);
  return m;
}

/// Maximum absolute column sum.
template <typename T>
T one_norm(const Matrix<T>& m) {
  using std::abs;
  T best(0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    T s(0);
    for (std::size_t i = 0; i < m.rows(); ++i) s += abs(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

inline bool all_finite(const Matrix<double>& m) {
  for (const double& x : m.data())
    if (!std::isfinite(x)) return false;
  return true;
}

/// Flips the sign of any row whose diagonal entry is negative, so that an
/// upper-triangular factor has a nonnegative diagonal. This pins down the
/// otherwise sign-ambiguous rows of QR/Cholesky factors.
template <typename T>
void normalize_factor_signs(Matrix<T>& r) {
  const std::size_t k = std::min(r.rows(), r.cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (r(i, i) < T(0))
      for (std::size_t j = 0; j < r.cols(); ++j)
        if (r(i, j) != T(0)) r(i, j) = -r(i, j);
  }
}

/// Upper-triangular factor R of a Householder QR decomposition, returned as
/// min(rows,cols) x cols with every diagonal entry >= 0. R'R = M'M up to
/// roundoff; rank deficiency is allowed (zero diagonal entries stay zero).
template <typename T>
Matrix<T> qr_upper(const Matrix<T>& m) {
  using std::sqrt;
  Matrix<T> a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t steps = std::min(rows, cols);
  std::vector<T> v(rows);
  for (std::size_t k = 0; k < steps; ++k) {
    T sq(0);
    for (std::size_t i = k; i < rows; ++i) sq += a(i, k) * a(i, k);
    if (sq == T(0)) continue;
    T norm = sqrt(sq);
    // alpha = -sign(a_kk) * ||x|| avoids cancellation in v_k.
    T alpha = a(k, k) >= T(0) ? -norm : norm;
    v[k] = a(k, k) - alpha;
    for (std::size_t i = k + 1; i < rows; ++i) v[i] = a(i, k);
    T vtv = v[k] * v[k] + (sq - a(k, k) * a(k, k));
    if (vtv == T(0)) continue;
    a(k, k) = alpha;
    for (std::size_t i = k + 1; i < rows; ++i) a(i, k) = T(0);
    for (std::size_t j = k + 1; j < cols; ++j) {
      T dot(0);
      for (std::size_t i = k; i < rows; ++i) dot += v[i] * a(i, j);
      T coef = T(2) * dot / vtv;
      for (std::size_t i = k; i < rows; ++i) a(i, j) -= coef * v[i];
    }
  }
  Matrix<T> r(steps, cols);
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t j = i; j < cols; ++j) r(i, j) = a(i, j);
  normalize_factor_signs(r);
  return r;
}

/// LU factorization with partial pivoting of a square matrix, reusable for
/// many right-hand sides. Pivots below n * u * ||M||_1 are treated as
/// singular (u = unit roundoff of the scalar type).
template <typename T>
class LuFactorization {
public:
  explicit LuFactorization(const Matrix<T>& m) : lu_(m), perm_(m.rows()) {
    using std::abs;
    if (m.rows() != m.cols())
      throw std::invalid_argument("lu_factor: matrix must be square");
    const std::size_t n = m.rows();
    const T eps = std::numeric_limits<T>::epsilon() / T(2);
    const T tiny = T(static_cast<double>(n)) * eps * one_norm(m);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      T best = abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        T cand = abs(lu_(i, k));
        if (cand > best) {
          best = cand;
          piv = i;
        }
      }
      if (!(best > tiny))
        throw std::runtime_error(
            "lu_factor: matrix is singular to working precision");
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        T f = lu_(i, k) / lu_(k, k);
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  std::size_t size() const { return lu_.rows(); }

  /// Solves M X = RHS for X.
  Matrix<T> solve(const Matrix<T>& rhs) const {
    const std::size_t n = size();
    if (rhs.rows() != n)
      throw std::invalid_argument("lu_solve: right-hand side row mismatch");
    const std::size_t m = rhs.cols();
    Matrix<T> x(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x(i, j) = rhs(perm_[i], j);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = k + 1; i < n; ++i) {
        const T& f = lu_(i, k);
        if (f == T(0)) continue;
        for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
      }
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t j = 0; j < m; ++j) {
        T s = x(k, j);
        for (std::size_t i = k + 1; i < n; ++i) s -= lu_(k, i) * x(i, j);
        x(k, j) = s / lu_(k, k);
      }
    }
    return x;
  }

private:
  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
};

template <typename T>
LuFactorization<T> lu_factor(const Matrix<T>& m) {
  return LuFactorization<T>(m);
}

template <typename T>
Matrix<T> lu_solve(const LuFactorization<T>& f, const Matrix<T>& rhs) {
  return f.solve(rhs);
}

/// Singular values by one-sided Jacobi, sorted descending. Small and
/// dependency-free; plenty for the moderate sizes this library targets.
template <typename T>
std::vector<T> singular_values(const Matrix<T>& m) {
  using std::abs;
  using std::sqrt;
  Matrix<T> a = m.rows() >= m.cols() ? m : m.transposed();
  const std::size_t rows = a.rows(), n = a.cols();
  const T eps = std::numeric_limits<T>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        T app(0), aqq(0), apq(0);
        for (std::size_t i = 0; i < rows; ++i) {
          app += a(i, p) * a(i, p);
          aqq += a(i, q) * a(i, q);
          apq += a(i, p) * a(i, q);
        }
        if (abs(apq) <= eps * sqrt(app * aqq) || apq == T(0)) continue;
        rotated = true;
        T tau = (aqq - app) / (T(2) * apq);
        T t = (tau >= T(0) ? T(1) : T(-1)) /
              (abs(tau) + sqrt(T(1) + tau * tau));
        T c = T(1) / sqrt(T(1) + t * t);
        T s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          T aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<T> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    T sq(0);
    for (std::size_t i = 0; i < rows; ++i) sq += a(i, j) * a(i, j);
    sv[j] = sqrt(sq);
  }
  std::sort(sv.begin(), sv.end(), [](const T& x, const T& y) { return x > y; });
  return sv;
}

}  // namespace expgram
