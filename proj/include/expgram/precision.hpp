#pragma once

#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "expgram/matrix.hpp"

namespace expgram {

/// Arbitrary-precision real scalar (MPFR-backed, runtime precision).
using MpReal =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

/// Requested working precision for the reference/oracle computations.
struct PrecisionSpec {
  int decimal_digits = 60;
};

/// Sets the thread default MPFR precision for the lifetime of the guard.
/// Every oracle entry point owns one of these, so concurrent callers with
/// separate threads never share precision state.
class ScopedPrecision {
public:
  explicit ScopedPrecision(const PrecisionSpec& spec)
      : saved_(MpReal::default_precision()) {
    if (spec.decimal_digits < 50)
      throw std::invalid_argument(
          "PrecisionSpec: at least 50 decimal digits required");
    MpReal::default_precision(static_cast<unsigned>(spec.decimal_digits));
  }
  explicit ScopedPrecision(int decimal_digits)
      : ScopedPrecision(PrecisionSpec{decimal_digits}) {}
  ~ScopedPrecision() { MpReal::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
  unsigned saved_;
};

inline Matrix<MpReal> to_mp(const Matrix<double>& m) {
  Matrix<MpReal> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = MpReal(m(i, j));
  return r;
}

inline Matrix<double> to_double(const Matrix<MpReal>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = m(i, j).convert_to<double>();
  return r;
}

}  // namespace expgram
