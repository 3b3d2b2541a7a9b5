#pragma once

#include <Eigen/LU>

#include "tbc2d/lobatto.hpp"
#include "tbc2d/types.hpp"

namespace tbc2d {

// Boundary segments in the order used throughout: left, right, bottom, top.
enum Segment { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

// Affine map between the reference square (-1,1)^2 and the physical
// rectangle (x_l, x_r) x (x_b, x_t):  x_p = J_p y_p + xbar_p,  beta_p = J_p^{-2}.
struct DomainMap {
  Real x_left, x_right, x_bottom, x_top;
  Real j1, j2;        // half-widths
  Real xc1, xc2;      // centers
  Real beta1, beta2;  // inverse-square scales

  DomainMap(Real xl, Real xr, Real xb, Real xt);
  static DomainMap square(Real lo, Real hi) { return {lo, hi, lo, hi}; }

  Real to_reference_x(Real x) const { return (x - xc1) / j1; }
  Real to_reference_y(Real y) const { return (y - xc2) / j2; }
  Real to_physical_x(Real y1) const { return j1 * y1 + xc1; }
  Real to_physical_y(Real y2) const { return j2 * y2 + xc2; }
};

// One-dimensional Galerkin operators in the Lobatto basis of degree N.
// mass is the full Gram matrix (pentadiagonal interior part, 2x2 boundary
// block, and the four boundary-interior couplings); stiffness is the identity
// on the interior modes plus the 2x2 boundary block; lambda selects the two
// boundary-carrying coefficients.
struct SpectralOperators {
  int degree = 0;
  Matrix mass;
  Matrix stiffness;
  Vector lambda_diag;  // (1, 1, 0, ..., 0)

  Matrix lambda() const { return Matrix(lambda_diag.asDiagonal()); }
};

SpectralOperators assemble_ops(int degree);  // requires degree >= 3

// Vandermonde-type matrix P(i,k) = phi_k(points(i)) (or phi'_k for order 1).
Matrix lobatto_vandermonde(const Vector& points, int degree, int order = 0);

// Everything a solver needs for a fixed domain and basis size, assembled once.
struct Basis2D {
  DomainMap dom;
  QuadratureRule rule1, rule2;
  SpectralOperators op1, op2;
  Matrix phi1, phi2;  // basis values at the LGL nodes
  Eigen::PartialPivLU<CMatrix> interp1, interp2;  // complex for complex nodal data
  Vector nodes1_phys, nodes2_phys;

  Basis2D(const DomainMap& dom_, int degree1, int degree2);
  int n1() const { return op1.degree; }
  int n2() const { return op2.degree; }
};

// Collocation interpolation: coefficients of the tensor Lobatto expansion that
// reproduces the given nodal values on the LGL x LGL grid.
CMatrix interpolate(const Basis2D& basis, const CMatrix& nodal_values);

// Tensor-basis evaluation at reference points (pts1 x pts2 grid).
CMatrix evaluate(const Basis2D& basis, const CMatrix& coeffs, const Vector& pts1,
                 const Vector& pts2);

// Evaluation back on the basis' own LGL grid (inverse of interpolate).
CMatrix evaluate_nodal(const Basis2D& basis, const CMatrix& coeffs);

// Restrictions of the field to the four boundary segments: the left/right
// traces are rows 0/1 of the coefficient matrix, the bottom/top traces are
// columns 0/1.
struct SegmentTraces {
  CVector left, right, bottom, top;
};
SegmentTraces restrict_traces(const CMatrix& coeffs);

// L2(Omega) norm of the expanded field, by LGL quadrature on the physical domain.
Real weighted_l2(const Basis2D& basis, const CMatrix& coeffs);

// Same quadrature applied to a nodal-value grid (used for errors against
// reference solutions sampled at the LGL nodes).
Real weighted_l2_nodal(const Basis2D& basis, const CMatrix& nodal_values);

}  // namespace tbc2d
