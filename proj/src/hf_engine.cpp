#include "tbc2d/hf_engine.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace tbc2d {

KronOperator hf_lhs_operator(const Basis2D& basis, Complex alpha1, Complex alpha2,
                             Real coef_plus, Real coef_minus) {
  const CMatrix m1 = basis.op1.mass.cast<Complex>();
  const CMatrix m2 = basis.op2.mass.cast<Complex>();
  const CMatrix s1 = basis.op1.stiffness.cast<Complex>();
  const CMatrix s2 = basis.op2.stiffness.cast<Complex>();
  const CMatrix l1 = basis.op1.lambda().cast<Complex>();
  const CMatrix l2 = basis.op2.lambda().cast<Complex>();
  const Complex ia1 = 1.0 / alpha1, ia2 = 1.0 / alpha2;

  KronOperator op;
  op.terms = {
      {1.0, m1, m2},
      {ia1 * ia1, s1, m2},
      {ia2 * ia2, m1, s2},
      {coef_plus * ia1, l1, m2},
      {coef_plus * ia2, m1, l2},
      {0.5 * coef_minus * ia1 * ia2 * ia2, l1, s2},
      {0.5 * coef_minus * ia1 * ia1 * ia2, s1, l2},
      {0.75 * ia1 * ia2, l1, l2},
  };
  return op;
}

namespace {

// L2 norm of the boundary trace, used only for the compact-support check.
Real trace_norm(const Basis2D& basis, const CMatrix& u) {
  const auto tr = restrict_traces(u);
  const Matrix& m1 = basis.op1.mass;
  const Matrix& m2 = basis.op2.mass;
  auto seg = [](const CVector& v, const Matrix& m, Real scale) {
    return scale * (v.adjoint() * m.cast<Complex>() * v).real()(0);
  };
  Real acc = seg(tr.left, m2, basis.dom.j2) + seg(tr.right, m2, basis.dom.j2) +
             seg(tr.bottom, m1, basis.dom.j1) + seg(tr.top, m1, basis.dom.j1);
  return std::sqrt(std::max(acc, 0.0));
}

}  // namespace

HFSolver::HFSolver(const HFConfig& cfg, const Basis2D& basis, const CMatrix& u0_coeffs)
    : cfg_(cfg), basis_(basis) {
  if (!(cfg.dt > 0)) throw std::invalid_argument("HFSolver: dt must be positive");
  if (cfg.variant == HfVariant::CP && cfg.pade_order < 1)
    throw std::invalid_argument("HFSolver: CP variant requires pade_order >= 1");
  if (u0_coeffs.rows() != basis.n1() + 1 || u0_coeffs.cols() != basis.n2() + 1)
    throw std::invalid_argument("HFSolver: u0 coefficient shape mismatch");

  m1_ = basis.op1.mass.cast<Complex>();
  m2_ = basis.op2.mass.cast<Complex>();
  s1_ = basis.op1.stiffness.cast<Complex>();
  s2_ = basis.op2.stiffness.cast<Complex>();
  u_ = u0_coeffs;
  u_prev_ = u0_coeffs;

  const Real u0_norm = weighted_l2(basis, u0_coeffs);
  if (u0_norm > 0 && trace_norm(basis, u0_coeffs) > 1e-8 * u0_norm)
    std::cerr << "HFSolver: warning: initial data has a significant boundary trace;"
                 " the transparent-boundary assumption supp u0 in the interior is violated\n";

  const Real rho = cq_rho(cfg.stepper, cfg.dt);
  alpha1_ = std::sqrt(rho / basis.dom.beta1) * phase_m4;
  alpha2_ = std::sqrt(rho / basis.dom.beta2) * phase_m4;

  Real cp_plus = 1.0, cp_minus = 1.0;
  if (cfg.variant == HfVariant::CP) {
    cp_ = discrete_pade(cfg.stepper, cfg.dt, basis.dom.beta1, basis.dom.beta2,
                        cfg.pade_order);
    cp_plus = cp_.varpi_plus_eff();
    cp_minus = cp_.varpi_minus_eff();
    for (int s = 0; s < 4; ++s) {
      const int len = (s < 2) ? basis.n2() + 1 : basis.n1() + 1;
      aux0_[s] = CVector::Zero(len);
      aux0_prev_[s] = CVector::Zero(len);
      aux_[s].assign(cfg.pade_order, CVector::Zero(len));
      aux_prev_[s].assign(cfg.pade_order, CVector::Zero(len));
    }
  }
  lhs_op_ = hf_lhs_operator(basis, alpha1_, alpha2_, cp_plus, cp_minus);
  lhs_ = std::make_unique<FactoredOperator>(lhs_op_);

  if (cfg.stepper == Stepper::BDF2) {
    const Real rho1 = cq_rho(Stepper::BDF1, cfg.dt);
    alpha1_start_ = std::sqrt(rho1 / basis.dom.beta1) * phase_m4;
    alpha2_start_ = std::sqrt(rho1 / basis.dom.beta2) * phase_m4;
    Real p = 1.0, m = 1.0;
    if (cfg.variant == HfVariant::CP) {
      cp_start_ = discrete_pade(Stepper::BDF1, cfg.dt, basis.dom.beta1,
                                basis.dom.beta2, cfg.pade_order);
      p = cp_start_.varpi_plus_eff();
      m = cp_start_.varpi_minus_eff();
    }
    lhs_start_ = std::make_unique<FactoredOperator>(
        hf_lhs_operator(basis, alpha1_start_, alpha2_start_, p, m));
  }
}

void HFSolver::ensure_weights(int count) {
  if (static_cast<int>(wp_.size()) >= count) return;
  const int cap = std::max(count, static_cast<int>(wp_.size()) * 2 + 16);
  wp_ = cq_weights(cfg_.stepper, 0.5, cap, cfg_.dt).w;
  wm_ = cq_weights(cfg_.stepper, -0.5, cap, cfg_.dt).w;
}

std::array<CVector, 4> HFSolver::trace_of(const CMatrix& u) const {
  const auto tr = restrict_traces(u);
  return {tr.left, tr.right, tr.bottom, tr.top};
}

void HFSolver::push_trace(const CMatrix& u) {
  auto tr = trace_of(u);
  for (int s = 0; s < 4; ++s) trace_[s].push_back(std::move(tr[s]));
}

CMatrix HFSolver::rank_boundary(const std::array<CVector, 4>& seg, Complex c1,
                                Complex c2, const CMatrix& right,
                                const CMatrix& left) const {
  CMatrix b = CMatrix::Zero(basis_.n1() + 1, basis_.n2() + 1);
  b.row(0) += c1 * (right * seg[kLeft]).transpose();
  b.row(1) += c1 * (right * seg[kRight]).transpose();
  b.col(0) += c2 * (left * seg[kBottom]);
  b.col(1) += c2 * (left * seg[kTop]);
  return b;
}

void HFSolver::step_cq() {
  const int j = step_;
  ensure_weights(j + 2);

  auto history = [&](const Vector& w, int steps, int offset) {
    // sum_{k=1}^{steps} w(offset - k) trace^k
    std::array<CVector, 4> acc;
    for (int s = 0; s < 4; ++s) {
      const int len = (s < 2) ? basis_.n2() + 1 : basis_.n1() + 1;
      acc[s] = CVector::Zero(len);
      for (int k = 1; k <= steps; ++k) acc[s] += w(offset - k) * trace_[s][k - 1];
    }
    return acc;
  };

  const bool bootstrap = (cfg_.stepper == Stepper::BDF2 && j == 0);
  const Complex a1 = bootstrap ? alpha1_start_ : alpha1_;
  const Complex a2 = bootstrap ? alpha2_start_ : alpha2_;

  CMatrix rhs;
  if (cfg_.stepper == Stepper::TR) {
    auto bp_new = history(wp_, j, j + 1);
    auto bm_new = history(wm_, j, j + 1);
    auto bp_old = history(wp_, j - 1 >= 0 ? j - 1 : 0, j);
    auto bm_old = history(wm_, j - 1 >= 0 ? j - 1 : 0, j);
    std::array<CVector, 4> bp, bm;
    for (int s = 0; s < 4; ++s) {
      bp[s] = 0.5 * (bp_new[s] + bp_old[s]);
      bm[s] = 0.5 * (bm_new[s] + bm_old[s]);
    }
    rhs = m1_ * u_ * m2_ - rank_boundary(bp, 1.0 / a1, 1.0 / a2, m2_, m1_) -
          rank_boundary(bm, 0.5 / (a1 * a2 * a2), 0.5 / (a1 * a1 * a2), s2_, s1_);
    const CMatrix v = lhs_->solve(rhs);
    u_ = 2.0 * v - u_;
  } else if (cfg_.stepper == Stepper::BDF1 || bootstrap) {
    // the bootstrap step (BDF2, j = 0) has no history, so BDF1 weights never enter
    auto bp = history(wp_, j, j + 1);
    auto bm = history(wm_, j, j + 1);
    rhs = m1_ * u_ * m2_ - rank_boundary(bp, 1.0 / a1, 1.0 / a2, m2_, m1_) -
          rank_boundary(bm, 0.5 / (a1 * a2 * a2), 0.5 / (a1 * a1 * a2), s2_, s1_);
    u_prev_ = u_;
    u_ = (bootstrap ? lhs_start_ : lhs_)->solve(rhs);
  } else {  // BDF2, j >= 1
    auto bp = history(wp_, j, j + 1);
    auto bm = history(wm_, j, j + 1);
    rhs = m1_ * (4.0 / 3.0 * u_ - 1.0 / 3.0 * u_prev_) * m2_ -
          rank_boundary(bp, 1.0 / a1, 1.0 / a2, m2_, m1_) -
          rank_boundary(bm, 0.5 / (a1 * a2 * a2), 0.5 / (a1 * a1 * a2), s2_, s1_);
    u_prev_ = u_;
    u_ = lhs_->solve(rhs);
  }
  push_trace(u_);
  ++step_;
}

void HFSolver::step_cp() {
  const int j = step_;
  const bool bootstrap = (cfg_.stepper == Stepper::BDF2 && j == 0);
  const DiscretePadeCoeffs& pc = bootstrap ? cp_start_ : cp_;
  const Complex a1 = bootstrap ? alpha1_start_ : alpha1_;
  const Complex a2 = bootstrap ? alpha2_start_ : alpha2_;
  const Vector gp = pc.gamma_plus_eff();
  const Vector gm = pc.gamma_minus_eff();
  const Real d0b = pc.d0_bar();
  const int K = cfg_.pade_order;

  // history vectors per segment
  std::array<CVector, 4> bp, bm;
  auto combine = [&](int s, int k) -> CVector {
    if (cfg_.stepper == Stepper::BDF2 && !bootstrap)
      return 4.0 / 3.0 * aux_[s][k] - 1.0 / 3.0 * aux_prev_[s][k];
    return aux_[s][k];
  };
  auto combine0 = [&](int s) -> CVector {
    if (cfg_.stepper == Stepper::BDF2 && !bootstrap)
      return 4.0 / 3.0 * aux0_[s] - 1.0 / 3.0 * aux0_prev_[s];
    return aux0_[s];
  };
  for (int s = 0; s < 4; ++s) {
    const int len = (s < 2) ? basis_.n2() + 1 : basis_.n1() + 1;
    bp[s] = CVector::Zero(len);
    bm[s] = CVector::Zero(len);
    for (int k = 0; k < K; ++k) {
      const CVector c = combine(s, k);
      bp[s] += gp(k) * c;
      bm[s] += gm(k) * c;
    }
    bm[s] -= d0b * combine0(s);
  }

  CMatrix mass_rhs;
  if (cfg_.stepper == Stepper::BDF2 && !bootstrap)
    mass_rhs = m1_ * (4.0 / 3.0 * u_ - 1.0 / 3.0 * u_prev_) * m2_;
  else
    mass_rhs = m1_ * u_ * m2_;
  CMatrix rhs = mass_rhs + rank_boundary(bp, 1.0 / a1, 1.0 / a2, m2_, m1_) +
                rank_boundary(bm, 0.5 / (a1 * a2 * a2), 0.5 / (a1 * a1 * a2), s2_, s1_);

  if (cfg_.stepper == Stepper::TR) {
    const CMatrix v = lhs_->solve(rhs);
    const auto tr = trace_of(v);  // midpoint trace
    u_ = 2.0 * v - u_;
    for (int s = 0; s < 4; ++s) {
      aux0_[s] += (2.0 / pc.rho) * tr[s];
      for (int k = 0; k < K; ++k)
        aux_[s][k] = pc.h_diag(k) * aux_[s][k] + (2.0 / pc.rho) * pc.g_diag(k) * tr[s];
    }
  } else {
    CMatrix unew = (bootstrap ? lhs_start_ : lhs_)->solve(rhs);
    u_prev_ = u_;
    u_ = unew;
    const auto tr = trace_of(u_);
    for (int s = 0; s < 4; ++s) {
      const CVector a0c = combine0(s);
      aux0_prev_[s] = aux0_[s];
      aux0_[s] = (1.0 / pc.rho) * tr[s] + a0c;
      for (int k = 0; k < K; ++k) {
        const CVector ac = combine(s, k);
        aux_prev_[s][k] = aux_[s][k];
        aux_[s][k] = pc.g_diag(k) * ((1.0 / pc.rho) * tr[s] + ac);
      }
    }
  }
  ++step_;
}

void HFSolver::step() {
  if (cfg_.variant == HfVariant::CQ)
    step_cq();
  else
    step_cp();
}

void HFSolver::run(int n_steps, const std::function<void(const HFSolver&)>& per_step) {
  for (int i = 0; i < n_steps; ++i) {
    step();
    if (per_step) per_step(*this);
  }
}

std::size_t HFSolver::state_size() const {
  std::size_t n = 0;
  if (cfg_.variant == HfVariant::CQ) {
    for (int s = 0; s < 4; ++s)
      for (const auto& v : trace_[s]) n += v.size();
  } else {
    for (int s = 0; s < 4; ++s) {
      n += aux0_[s].size() + aux0_prev_[s].size();
      for (const auto& v : aux_[s]) n += v.size();
      for (const auto& v : aux_prev_[s]) n += v.size();
    }
  }
  return n;
}

}  // namespace tbc2d
