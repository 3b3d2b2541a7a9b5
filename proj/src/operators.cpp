#include "tbc2d/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace tbc2d {

DomainMap::DomainMap(Real xl, Real xr, Real xb, Real xt)
    : x_left(xl), x_right(xr), x_bottom(xb), x_top(xt) {
  if (!(xl < xr) || !(xb < xt))
    throw std::invalid_argument("DomainMap: require x_left < x_right and x_bottom < x_top");
  j1 = 0.5 * (xr - xl);
  j2 = 0.5 * (xt - xb);
  xc1 = 0.5 * (xl + xr);
  xc2 = 0.5 * (xb + xt);
  beta1 = 1.0 / (j1 * j1);
  beta2 = 1.0 / (j2 * j2);
}

SpectralOperators assemble_ops(int degree) {
  if (degree < 3) throw std::invalid_argument("assemble_ops: degree must be >= 3");
  const int n = degree;
  SpectralOperators ops;
  ops.degree = n;
  ops.mass = Matrix::Zero(n + 1, n + 1);
  ops.stiffness = Matrix::Zero(n + 1, n + 1);
  ops.lambda_diag = Vector::Zero(n + 1);
  ops.lambda_diag(0) = ops.lambda_diag(1) = 1.0;

  Matrix& m = ops.mass;
  Matrix& s = ops.stiffness;

  s(0, 0) = s(1, 1) = 0.5;
  s(0, 1) = s(1, 0) = -0.5;
  m(0, 0) = m(1, 1) = 2.0 / 3.0;
  m(0, 1) = m(1, 0) = 1.0 / 3.0;

  // m_{k-2,k} = c_{k-2} c_k (phi cross term) = -1 / ((2k-3) sqrt((2k-5)(2k-1)));
  // the (2k-3) factor comes from the L_{k-2} self-overlap 2/(2k-3).
  for (int k = 2; k <= n; ++k) {
    s(k, k) = 1.0;
    m(k, k) = 2.0 / ((2.0 * k + 1.0) * (2.0 * k - 3.0));
    if (k - 2 >= 2) {
      const Real v =
          -1.0 / ((2.0 * k - 3.0) * std::sqrt((2.0 * k - 1.0) * (2.0 * k - 5.0)));
      m(k - 2, k) = v;
      m(k, k - 2) = v;
    }
  }

  // Couplings of phi_0, phi_1 with phi_2, phi_3 from the exact Legendre
  // integrals; all higher interior modes are orthogonal to L_0 and L_1.
  const Real c2 = 1.0 / std::sqrt(6.0);
  const Real c3 = 1.0 / std::sqrt(10.0);
  m(0, 2) = m(2, 0) = -c2;
  m(1, 2) = m(2, 1) = -c2;
  m(0, 3) = m(3, 0) = c3 / 3.0;
  m(1, 3) = m(3, 1) = -c3 / 3.0;

  return ops;
}

Matrix lobatto_vandermonde(const Vector& points, int degree, int order) {
  Matrix p(points.size(), degree + 1);
  for (Eigen::Index i = 0; i < points.size(); ++i)
    for (int k = 0; k <= degree; ++k) p(i, k) = lobatto_eval(k, points(i), order);
  return p;
}

Basis2D::Basis2D(const DomainMap& dom_, int degree1, int degree2)
    : dom(dom_),
      rule1(lgl_grid(degree1)),
      rule2(lgl_grid(degree2)),
      op1(assemble_ops(degree1)),
      op2(assemble_ops(degree2)) {
  phi1 = lobatto_vandermonde(rule1.nodes, degree1);
  phi2 = lobatto_vandermonde(rule2.nodes, degree2);
  interp1.compute(phi1.cast<Complex>());
  interp2.compute(phi2.cast<Complex>());
  // Distinct LGL nodes make the collocation systems nonsingular; guard anyway.
  if (interp1.rcond() < 1e-14 || interp2.rcond() < 1e-14)
    throw std::runtime_error("Basis2D: singular collocation system");
  nodes1_phys = (dom.j1 * rule1.nodes).array() + dom.xc1;
  nodes2_phys = (dom.j2 * rule2.nodes).array() + dom.xc2;
}

CMatrix interpolate(const Basis2D& basis, const CMatrix& nodal_values) {
  if (nodal_values.rows() != basis.phi1.rows() || nodal_values.cols() != basis.phi2.rows())
    throw std::invalid_argument("interpolate: grid shape mismatch");
  // V = P1 * U * P2^T  =>  U = P1^{-1} V P2^{-T}
  const CMatrix tmp = basis.interp1.solve(nodal_values);
  const CMatrix ut = basis.interp2.solve(tmp.transpose());
  return ut.transpose();
}

CMatrix evaluate(const Basis2D& basis, const CMatrix& coeffs, const Vector& pts1,
                 const Vector& pts2) {
  const Matrix p1 = lobatto_vandermonde(pts1, basis.n1());
  const Matrix p2 = lobatto_vandermonde(pts2, basis.n2());
  return p1 * coeffs * p2.transpose();
}

CMatrix evaluate_nodal(const Basis2D& basis, const CMatrix& coeffs) {
  return basis.phi1 * coeffs * basis.phi2.transpose();
}

SegmentTraces restrict_traces(const CMatrix& coeffs) {
  SegmentTraces tr;
  tr.left = coeffs.row(0).transpose();
  tr.right = coeffs.row(1).transpose();
  tr.bottom = coeffs.col(0);
  tr.top = coeffs.col(1);
  return tr;
}

Real weighted_l2_nodal(const Basis2D& basis, const CMatrix& nodal_values) {
  const Real scale = basis.dom.j1 * basis.dom.j2;
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < nodal_values.rows(); ++i)
    for (Eigen::Index j = 0; j < nodal_values.cols(); ++j)
      acc += basis.rule1.weights(i) * basis.rule2.weights(j) *
             std::norm(nodal_values(i, j));
  return std::sqrt(scale * acc);
}

Real weighted_l2(const Basis2D& basis, const CMatrix& coeffs) {
  return weighted_l2_nodal(basis, evaluate_nodal(basis, coeffs));
}

}  // namespace tbc2d
