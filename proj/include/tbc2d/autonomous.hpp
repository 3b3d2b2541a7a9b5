#pragma once

#include "tbc2d/operators.hpp"
#include "tbc2d/rational.hpp"
#include "tbc2d/types.hpp"

namespace tbc2d {

// Dense block form d/dt V = M V of the Pade-based high-frequency system. The
// state vector stacks vec(U) followed by vec(A_{k,1}), k = 0..K, and
// vec(A_{k,2}), k = 0..K (column-major vectorization throughout). Only the
// diagonal, the first block row and the first block column of M are nonzero;
// the auxiliary diagonal blocks are -eta_k^2 I with eta_0 = 0.
struct AutonomousSystem {
  int degree1 = 0, degree2 = 0, order = 0;
  CMatrix m;

  int block_size() const { return (degree1 + 1) * (degree2 + 1); }
  int block_count() const { return 2 * order + 3; }
};

// Guarded to small bases: dense eigen/LU work on (2K+3)(N1+1)(N2+1) unknowns.
AutonomousSystem assemble_autonomous(const Basis2D& basis, int pade_order);

// One step of BDF1 ((I - dt M) V' = V) or TR ((I - dt M/2) V' = (I + dt M/2) V).
CVector reference_step(const AutonomousSystem& sys, const CVector& v, Real dt,
                       Stepper scheme);

// Max real part of the spectrum of M (informational).
Real spectral_abscissa(const AutonomousSystem& sys);

}  // namespace tbc2d
