#pragma once

#include <random>
#include <vector>

#include "expgram/matrix.hpp"

namespace test_support {

// Fixed seed so every randomized test is reproducible; see README.
inline constexpr unsigned long kSeed = 2024;

inline expgram::Matrix<double> random_matrix(std::mt19937_64& rng,
                                             std::size_t rows,
                                             std::size_t cols,
                                             double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  expgram::Matrix<double> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * normal(rng);
  return m;
}

// Random matrix rescaled so its 1-norm is exactly `norm_bound` at most.
inline expgram::Matrix<double> random_matrix_with_norm(std::mt19937_64& rng,
                                                       std::size_t n,
                                                       double norm_bound) {
  expgram::Matrix<double> m = random_matrix(rng, n, n);
  const double norm = expgram::one_norm(m);
  if (norm > 0.0) m *= norm_bound / norm;
  return m;
}

// Product of random Givens rotations: orthogonal by construction.
inline expgram::Matrix<double> random_orthogonal(std::mt19937_64& rng,
                                                 std::size_t n) {
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  expgram::Matrix<double> t = expgram::Matrix<double>::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double th = angle(rng);
      const double c = std::cos(th), s = std::sin(th);
      for (std::size_t k = 0; k < n; ++k) {
        const double ti = t(i, k), tj = t(j, k);
        t(i, k) = c * ti - s * tj;
        t(j, k) = s * ti + c * tj;
      }
    }
  return t;
}

inline double rel_diff_1norm(const expgram::Matrix<double>& x,
                             const expgram::Matrix<double>& ref) {
  return expgram::one_norm(x - ref) / expgram::one_norm(ref);
}

}  // namespace test_support
