#include "tbc2d/lobatto.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbc2d {

Real lobatto_eval(int k, Real y, int order) {
  if (order == 0) return lobatto(k, y);
  if (order == 1) return lobatto_deriv(k, y);
  throw std::invalid_argument("lobatto_eval: order must be 0 or 1");
}

QuadratureRule lgl_grid(int degree) {
  if (degree < 1) throw std::invalid_argument("lgl_grid: degree must be >= 1");
  const int n = degree;
  QuadratureRule rule;
  rule.nodes.resize(n + 1);
  rule.weights.resize(n + 1);

  rule.nodes(0) = -1.0;
  rule.nodes(n) = 1.0;

  // Interior nodes: roots of L'_N by Newton iteration seeded with
  // Chebyshev-Gauss-Lobatto points. L''_N from (1-y^2) L''_N = 2y L'_N - N(N+1) L_N.
  const Real tol = 1e-14;
  const int max_iter = 100;
  for (int i = 1; i < n; ++i) {
    Real y = -std::cos(pi * i / n);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      auto [l, dl] = legendre_with_deriv(n, y);
      const Real d2l = (2.0 * y * dl - n * (n + 1.0) * l) / (1.0 - y * y);
      const Real dy = dl / d2l;
      y -= dy;
      if (std::abs(dy) < tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("lgl_grid: Newton iteration failed for node " +
                               std::to_string(i));
    rule.nodes(i) = y;
  }

  for (int i = 0; i <= n; ++i) {
    const Real l = legendre(n, rule.nodes(i));
    rule.weights(i) = 2.0 / (n * (n + 1.0) * l * l);
  }
  return rule;
}

}  // namespace tbc2d
