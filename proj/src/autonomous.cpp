#include "tbc2d/autonomous.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace tbc2d {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace

AutonomousSystem assemble_autonomous(const Basis2D& basis, int pade_order) {
  if (basis.n1() > 16 || basis.n2() > 16)
    throw std::invalid_argument("assemble_autonomous: basis too large for dense work");
  if (pade_order < 1) throw std::invalid_argument("assemble_autonomous: order >= 1");

  const int k_max = pade_order;
  const Real beta1 = basis.dom.beta1, beta2 = basis.dom.beta2;
  const PadeSqrt pade = pade_sqrt(k_max);

  const CMatrix m1 = basis.op1.mass.cast<Complex>();
  const CMatrix m2 = basis.op2.mass.cast<Complex>();
  const CMatrix s1 = basis.op1.stiffness.cast<Complex>();
  const CMatrix s2 = basis.op2.stiffness.cast<Complex>();
  const CMatrix l1 = basis.op1.lambda().cast<Complex>();
  const CMatrix l2 = basis.op2.lambda().cast<Complex>();
  const CMatrix i1 = CMatrix::Identity(basis.n1() + 1, basis.n1() + 1);
  const CMatrix i2 = CMatrix::Identity(basis.n2() + 1, basis.n2() + 1);

  AutonomousSystem sys;
  sys.degree1 = basis.n1();
  sys.degree2 = basis.n2();
  sys.order = k_max;
  const int n = sys.block_size();
  const int dim = sys.block_count() * n;
  sys.m = CMatrix::Zero(dim, dim);

  // modified stiffness S'_p = S_p + e^{-i pi/4} (b0 / sqrt(beta_p)) Lambda_p
  const CMatrix s1p = s1 + phase_m4 * (pade.b0 / std::sqrt(beta1)) * l1;
  const CMatrix s2p = s2 + phase_m4 * (pade.b0 / std::sqrt(beta2)) * l2;

  Eigen::PartialPivLU<CMatrix> mass_lu(kron(m2, m1));
  const Complex iunit(0, 1);

  auto solve_block = [&](const CMatrix& rhs) { return mass_lu.solve(rhs); };

  // field block
  sys.m.block(0, 0, n, n) = solve_block(
      -iunit * (beta1 * kron(m2, s1p) + beta2 * kron(s2p, m1) +
                0.75 * std::sqrt(beta1 * beta2) * kron(l2, l1)));

  // first row, k = 0 blocks carry the d0 stiffness action
  const Complex g01 = phase_p4 * 0.5 * pade.d0 * std::sqrt(beta1) * beta2;
  const Complex g02 = phase_p4 * 0.5 * pade.d0 * std::sqrt(beta2) * beta1;
  sys.m.block(0, n, n, n) = solve_block(-iunit * g01 * kron(s2, i1));
  sys.m.block(0, (k_max + 2) * n, n, n) = solve_block(-iunit * g02 * kron(i2, s1));

  // first row, k >= 1: the b_k part acts through the mass matrix, the d_k
  // part through the stiffness matrix
  for (int k = 1; k <= k_max; ++k) {
    const Complex cb1 = -phase_m4 * std::sqrt(beta1) * pade.b(k - 1);
    const Complex cd1 = -phase_p4 * 0.5 * std::sqrt(beta1) * beta2 * pade.d(k - 1);
    sys.m.block(0, (1 + k) * n, n, n) =
        solve_block(-iunit * (cb1 * kron(m2, i1) + cd1 * kron(s2, i1)));
    const Complex cb2 = -phase_m4 * std::sqrt(beta2) * pade.b(k - 1);
    const Complex cd2 = -phase_p4 * 0.5 * beta1 * std::sqrt(beta2) * pade.d(k - 1);
    sys.m.block(0, (k_max + 2 + k) * n, n, n) =
        solve_block(-iunit * (cb2 * kron(i2, m1) + cd2 * kron(i2, s1)));
  }

  // first column and the auxiliary diagonal (-eta_k^2 I, eta_0 = 0)
  const CMatrix col1 = kron(i2, l1);
  const CMatrix col2 = kron(l2, i1);
  for (int k = 0; k <= k_max; ++k) {
    const Real ek2 = (k == 0) ? 0.0 : pade.eta(k - 1) * pade.eta(k - 1);
    sys.m.block((1 + k) * n, 0, n, n) = col1;
    sys.m.block((k_max + 2 + k) * n, 0, n, n) = col2;
    sys.m.block((1 + k) * n, (1 + k) * n, n, n) = -ek2 * CMatrix::Identity(n, n);
    sys.m.block((k_max + 2 + k) * n, (k_max + 2 + k) * n, n, n) =
        -ek2 * CMatrix::Identity(n, n);
  }
  return sys;
}

CVector reference_step(const AutonomousSystem& sys, const CVector& v, Real dt,
                       Stepper scheme) {
  if (v.size() != sys.m.rows())
    throw std::invalid_argument("reference_step: state dimension mismatch");
  const CMatrix eye = CMatrix::Identity(sys.m.rows(), sys.m.cols());
  switch (scheme) {
    case Stepper::BDF1: {
      Eigen::PartialPivLU<CMatrix> lu(eye - dt * sys.m);
      return lu.solve(v);
    }
    case Stepper::TR: {
      Eigen::PartialPivLU<CMatrix> lu(eye - 0.5 * dt * sys.m);
      return lu.solve(v + 0.5 * dt * (sys.m * v));
    }
    default:
      throw std::invalid_argument("reference_step: BDF1 or TR only");
  }
}

Real spectral_abscissa(const AutonomousSystem& sys) {
  Eigen::ComplexEigenSolver<CMatrix> es(sys.m, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_abscissa: eigensolver failed");
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace tbc2d
