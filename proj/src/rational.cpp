#include "tbc2d/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbc2d {

const char* stepper_name(Stepper s) {
  switch (s) {
    case Stepper::BDF1: return "bdf1";
    case Stepper::BDF2: return "bdf2";
    case Stepper::TR: return "tr";
  }
  return "?";
}

Real cq_rho(Stepper scheme, Real dt) {
  if (!(dt > 0)) throw std::invalid_argument("cq_rho: dt must be positive");
  switch (scheme) {
    case Stepper::BDF1: return 1.0 / dt;
    case Stepper::BDF2: return 1.5 / dt;
    case Stepper::TR: return 2.0 / dt;
  }
  throw std::invalid_argument("cq_rho: bad scheme");
}

CQWeights cq_weights(Stepper scheme, Real nu, int count, Real dt) {
  if (count < 1) throw std::invalid_argument("cq_weights: count must be >= 1");
  if (nu != 0.5 && nu != -0.5)
    throw std::invalid_argument("cq_weights: nu must be +1/2 or -1/2");
  CQWeights res;
  res.scheme = scheme;
  res.nu = nu;
  res.rho = cq_rho(scheme, dt);
  Vector& w = res.w;
  w.resize(count);
  w(0) = 1.0;
  switch (scheme) {
    case Stepper::BDF1:
      for (int k = 1; k < count; ++k) w(k) = ((k - 1 - nu) / k) * w(k - 1);
      break;
    case Stepper::BDF2:
      if (count > 1) w(1) = -4.0 * nu / 3.0;
      for (int k = 2; k < count; ++k)
        w(k) = (4.0 * (k - 1 - nu) / (3.0 * k)) * w(k - 1) -
               ((k - 2 - 2 * nu) / (3.0 * k)) * w(k - 2);
      break;
    case Stepper::TR:
      if (count > 1) w(1) = -2.0 * nu;
      for (int k = 1; k + 1 < count; ++k)
        w(k + 1) = ((k - 1.0) * w(k - 1) - 2.0 * nu * w(k)) / (k + 1.0);
      break;
  }
  return res;
}

CVector cq_history(const CQWeights& w, std::span<const CVector> trace, int j) {
  if (static_cast<int>(trace.size()) < j + 1)
    throw std::invalid_argument("cq_history: need samples F^1..F^{j+1}");
  if (j + 1 > w.w.size())
    throw std::invalid_argument("cq_history: not enough weights");
  const Real scale = std::pow(w.rho, w.nu);
  CVector acc = CVector::Zero(trace[0].size());
  for (int k = 1; k <= j; ++k) acc += w.w(j + 1 - k) * trace[k - 1];
  return scale * acc;
}

CVector cq_apply(const CQWeights& w, std::span<const CVector> trace, int j) {
  if (static_cast<int>(trace.size()) < j + 1)
    throw std::invalid_argument("cq_apply: need samples F^1..F^{j+1}");
  const Real scale = std::pow(w.rho, w.nu);
  return scale * trace[j] + cq_history(w, trace, j);
}

PadeSqrt pade_sqrt(int order) {
  if (order < 1) throw std::invalid_argument("pade_sqrt: order must be >= 1");
  PadeSqrt p;
  p.order = order;
  p.b0 = 2.0 * order + 1.0;
  p.b.resize(order);
  p.eta.resize(order);
  p.d.resize(order);
  Real acc = 0.0;
  for (int k = 1; k <= order; ++k) {
    const Real eta = std::tan(k * pi / (2.0 * order + 1.0));
    const Real e2 = eta * eta;
    p.eta(k - 1) = eta;
    p.b(k - 1) = 2.0 * e2 * (1.0 + e2) / (2.0 * order + 1.0);
    p.d(k - 1) = -p.b(k - 1) / e2;
    acc += p.b(k - 1) / e2;
  }
  p.d0 = p.b0 - acc;
  return p;
}

Complex eval_rational(const PadeSqrt& p, Real power, Complex z) {
  if (power != 0.5 && power != -0.5)
    throw std::invalid_argument("eval_rational: power must be +1/2 or -1/2");
  const Real pole_tol = 1e-14;
  if (power < 0 && std::abs(z) < pole_tol)
    throw std::invalid_argument("eval_rational: z = 0 is a pole of R^{-1/2}");
  Complex acc = 0;
  for (int k = 0; k < p.order; ++k) {
    const Complex den = z + p.eta(k) * p.eta(k);
    if (std::abs(den) < pole_tol)
      throw std::invalid_argument("eval_rational: z hits the pole -eta_" +
                                  std::to_string(k + 1) + "^2");
    acc += (power > 0 ? p.b(k) : p.d(k)) / den;
  }
  return power > 0 ? p.b0 - acc : p.d0 / z - acc;
}

DiscretePadeCoeffs discrete_pade(Stepper scheme, Real dt, Real beta1, Real beta2,
                                 int order) {
  if (!(dt > 0)) throw std::invalid_argument("discrete_pade: dt must be positive");
  DiscretePadeCoeffs c;
  c.scheme = scheme;
  c.dt = dt;
  c.rho = cq_rho(scheme, dt);
  c.pade = pade_sqrt(order);
  const Real sr = std::sqrt(c.rho);
  c.eta_bar = c.pade.eta / sr;
  c.alpha1 = std::sqrt(c.rho / beta1) * phase_m4;
  c.alpha2 = std::sqrt(c.rho / beta2) * phase_m4;
  c.g_diag.resize(order);
  c.h_diag.resize(order);
  c.gamma_plus.resize(order);
  c.gamma_minus.resize(order);
  for (int k = 0; k < order; ++k) {
    const Real eb2 = c.eta_bar(k) * c.eta_bar(k);
    c.g_diag(k) = 1.0 / (1.0 + eb2);
    c.h_diag(k) = (1.0 - eb2) / (1.0 + eb2);
    c.gamma_plus(k) = c.pade.b(k) * c.g_diag(k);
    c.gamma_minus(k) = c.pade.d(k) * c.g_diag(k);
  }
  c.varpi_plus = c.pade.b0 - c.gamma_plus.sum() / c.rho;
  c.varpi_minus = (c.pade.d0 - c.gamma_minus.sum()) / c.rho;
  return c;
}

}  // namespace tbc2d
