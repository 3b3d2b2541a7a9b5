#pragma once

#include <span>
#include <vector>

#include "tbc2d/types.hpp"

namespace tbc2d {

enum class Stepper { BDF1, BDF2, TR };

const char* stepper_name(Stepper s);

// CQ scale rho: 1/dt (BDF1), 3/(2 dt) (BDF2), 2/dt (TR); chosen so that the
// leading convolution weight is 1.
Real cq_rho(Stepper scheme, Real dt);

// Convolution-quadrature weights omega_k^{(nu)}, nu = +1/2 or -1/2, generated
// by the recurrence of the underlying multistep method. omega_0 = 1 always.
struct CQWeights {
  Stepper scheme;
  Real nu;   // +0.5 or -0.5
  Real rho;  // scale, function of dt
  Vector w;
};

CQWeights cq_weights(Stepper scheme, Real nu, int count, Real dt = 1.0);

// [d_t^nu F]^{j+1} = rho^nu (F^{j+1} + sum_{k=1}^{j} omega_{j+1-k} F^k),
// given the samples F^1 ... F^{j+1} (trace[0] = F^1).
CVector cq_apply(const CQWeights& w, std::span<const CVector> trace, int j);
// The history part alone: rho^nu sum_{k=1}^{j} omega_{j+1-k} F^k.
CVector cq_history(const CQWeights& w, std::span<const CVector> trace, int j);

// Diagonal Pade data for sqrt(z) and 1/sqrt(z):
//   R_K^{1/2}(z)  = b0 - sum b_k / (z + eta_k^2),
//   R_K^{-1/2}(z) = d0/z - sum d_k / (z + eta_k^2) = R_K^{1/2}(z) / z.
struct PadeSqrt {
  int order = 0;
  Real b0 = 0, d0 = 0;
  Vector b, eta, d;
};

PadeSqrt pade_sqrt(int order);

// Partial-fraction evaluation; power is +0.5 or -0.5. Throws on a pole.
Complex eval_rational(const PadeSqrt& p, Real power, Complex z);

// Scheme-dependent constants shared by the Pade-based steppers.
// gamma_plus/gamma_minus and varpi_plus/varpi_minus follow
//   Gamma_k^{(1/2)} = b_k / (1 + etabar_k^2),      varpi^{(1/2)}  = b0 - (1/rho) sum Gamma_k^{(1/2)},
//   Gamma_k^{(-1/2)} = d_k / (1 + etabar_k^2),     varpi^{(-1/2)} = d0/rho - (1/rho) sum Gamma_k^{(-1/2)},
// with etabar_k = eta_k / sqrt(rho). The *_eff variants carry the rho^{-1/2}
// (plus family) and rho^{+1/2} (minus family) factors that the one-step
// discretization attaches to the boundary terms; the steppers use those.
struct DiscretePadeCoeffs {
  Stepper scheme;
  Real dt = 0, rho = 0;
  PadeSqrt pade;
  Vector eta_bar;
  Complex alpha1, alpha2;  // sqrt(rho/beta_p) e^{-i pi/4}
  Vector g_diag;           // G_K = 1 / (1 + etabar^2)
  Vector h_diag;           // H_K = (1 - etabar^2) / (1 + etabar^2)
  Vector gamma_plus, gamma_minus;
  Real varpi_plus = 0, varpi_minus = 0;

  Real varpi_plus_eff() const { return varpi_plus / std::sqrt(rho); }
  Real varpi_minus_eff() const { return varpi_minus * std::sqrt(rho); }
  Vector gamma_plus_eff() const { return gamma_plus / std::sqrt(rho); }
  Vector gamma_minus_eff() const { return gamma_minus * std::sqrt(rho); }
  Real d0_bar() const { return pade.d0 * std::sqrt(rho); }
};

DiscretePadeCoeffs discrete_pade(Stepper scheme, Real dt, Real beta1, Real beta2,
                                 int order);

}  // namespace tbc2d
