#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "expgram/matrix.hpp"

namespace expgram {

/// Plain-text matrix format: a header line `rows cols`, then rows*cols
/// whitespace-separated decimal values in row-major order. Values written
/// with 17 significant digits round-trip bitwise.

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("matrix parse error at line " +
                           std::to_string(line) + ": " + what);
}

}  // namespace detail

inline Matrix<double> parse_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) detail::parse_fail(1, "missing header");
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  std::string extra;
  if (!(header >> rows >> cols) || (header >> extra) || rows < 1 || cols < 1)
    detail::parse_fail(1, "expected header 'rows cols'");

  const std::size_t want =
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<double> values;
  values.reserve(want);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      const char* begin = tok.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end != begin + tok.size())
        detail::parse_fail(line_no, "invalid value '" + tok + "'");
      if (!std::isfinite(v))
        detail::parse_fail(line_no, "non-finite value '" + tok + "'");
      if (values.size() == want)
        detail::parse_fail(line_no, "expected " + std::to_string(want) +
                                        " values, found more");
      values.push_back(v);
    }
  }
  if (values.size() != want)
    detail::parse_fail(line_no, "expected " + std::to_string(want) +
                                    " values, found " +
                                    std::to_string(values.size()));
  Matrix<double> m(static_cast<std::size_t>(rows),
                   static_cast<std::size_t>(cols));
  m.data() = std::move(values);
  return m;
}

inline Matrix<double> parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  try {
    return parse_matrix(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void write_matrix(const Matrix<double>& m, std::ostream& out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 == m.cols() ? '\n' : ' ');
    }
  }
}

inline void write_matrix_file(const Matrix<double>& m,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_matrix(m, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace expgram
