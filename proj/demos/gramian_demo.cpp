// Minimal usage example: the 2x2 chain A = [[0,0],[1,0]], B = e1 has the
// closed-form Gramian [[1, 1/2], [1/2, 1/3]] over the unit horizon.

#include <cstdio>

#include "expgram/expgram.hpp"

int main() {
  expgram::Matrix<double> a = {{0.0, 0.0}, {1.0, 0.0}};
  expgram::Matrix<double> b = {{1.0}, {0.0}};

  expgram::ExpGramResult res = expgram::exp_and_gram({a, b, 1.0});

  std::printf("selected order q=%d, doublings s=%d\n", res.order_scaling.q,
              res.order_scaling.s);
  std::printf("phi = e^A:\n");
  for (std::size_t i = 0; i < res.phi.rows(); ++i)
    std::printf("  % .15f % .15f\n", res.phi(i, 0), res.phi(i, 1));
  std::printf("u (upper triangular, u'u ~ Gramian):\n");
  for (std::size_t i = 0; i < res.u.rows(); ++i)
    std::printf("  % .15f % .15f\n", res.u(i, 0), res.u(i, 1));

  expgram::Matrix<double> gram = res.u.transposed() * res.u;
  std::printf("u'u:\n");
  for (std::size_t i = 0; i < gram.rows(); ++i)
    std::printf("  % .15f % .15f\n", gram(i, 0), gram(i, 1));
  return 0;
}
