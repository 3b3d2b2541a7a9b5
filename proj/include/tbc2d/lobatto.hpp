#pragma once

#include <utility>

#include "tbc2d/types.hpp"

namespace tbc2d {

// Legendre polynomial L_n(y) and derivative via the three-term recurrences
//   (n+1) L_{n+1} = (2n+1) y L_n - n L_{n-1},
//   L'_{n+1} = L'_{n-1} + (2n+1) L_n.
template <typename Scalar>
Scalar legendre(int n, Scalar y) {
  if (n == 0) return Scalar(1);
  Scalar lm = Scalar(1), l = y;
  for (int m = 1; m < n; ++m) {
    Scalar lp = ((2 * m + 1) * y * l - Real(m) * lm) / Real(m + 1);
    lm = l;
    l = lp;
  }
  return l;
}

template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_deriv(int n, Scalar y) {
  if (n == 0) return {Scalar(1), Scalar(0)};
  Scalar lm = Scalar(1), l = y;
  Scalar dm = Scalar(0), d = Scalar(1);
  for (int m = 1; m < n; ++m) {
    Scalar lp = ((2 * m + 1) * y * l - Real(m) * lm) / Real(m + 1);
    Scalar dp = dm + (2 * m + 1) * l;
    lm = l;
    l = lp;
    dm = d;
    d = dp;
  }
  return {l, d};
}

// Boundary-adapted Lobatto basis:
//   phi_0 = (L_0 - L_1)/2, phi_1 = (L_0 + L_1)/2,
//   phi_k = (L_k - L_{k-2}) / sqrt(2(2k-1)),  k >= 2,
// so phi_k(+-1) = 0 for k >= 2 while phi_0, phi_1 carry the endpoint values.
template <typename Scalar>
Scalar lobatto(int k, Scalar y) {
  if (k == 0) return (Scalar(1) - y) / Real(2);
  if (k == 1) return (Scalar(1) + y) / Real(2);
  const Real ck = 1.0 / std::sqrt(2.0 * (2.0 * k - 1.0));
  return ck * (legendre(k, y) - legendre(k - 2, y));
}

template <typename Scalar>
Scalar lobatto_deriv(int k, Scalar y) {
  if (k == 0) return Scalar(-0.5);
  if (k == 1) return Scalar(0.5);
  const Real ck = 1.0 / std::sqrt(2.0 * (2.0 * k - 1.0));
  return ck * (legendre_with_deriv(k, y).second - legendre_with_deriv(k - 2, y).second);
}

// order 0 -> phi_k(y), order 1 -> phi'_k(y)
Real lobatto_eval(int k, Real y, int order);

struct QuadratureRule {
  Vector nodes;    // ascending in [-1, 1], endpoints included
  Vector weights;  // positive, sum to 2
  int degree() const { return static_cast<int>(nodes.size()) - 1; }
};

// Legendre-Gauss-Lobatto rule with N+1 points: +-1 plus the roots of L'_N,
// weights 2 / (N(N+1) L_N(x)^2). Exact for polynomials of degree <= 2N-1.
QuadratureRule lgl_grid(int degree);

}  // namespace tbc2d
