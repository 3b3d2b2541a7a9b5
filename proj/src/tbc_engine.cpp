#include "tbc2d/tbc_engine.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace tbc2d {

KronOperator tbc_lhs_operator(const Basis2D& basis, Complex alpha1, Complex alpha2,
                              Real coef_plus) {
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
  };
  return op;
}

namespace {

// corner entry positions in any 2-row or 2-column restriction
inline int corner_row(int c) { return (c == kLB || c == kLT) ? 0 : 1; }
inline int corner_col(int c) { return (c == kLB || c == kRB) ? 0 : 1; }

}  // namespace

TBCSolver::TBCSolver(const TBCConfig& cfg, const Basis2D& basis, const CMatrix& u0_coeffs)
    : cfg_(cfg), basis_(basis) {
  if (!(cfg.dt > 0)) throw std::invalid_argument("TBCSolver: dt must be positive");
  if (cfg.stepper == Stepper::BDF2)
    throw std::invalid_argument("TBCSolver: BDF2 is not available for the exact TBC");
  if (cfg.variant == TbcVariant::NP && cfg.pade_order < 1)
    throw std::invalid_argument("TBCSolver: NP variant requires pade_order >= 1");
  if (u0_coeffs.rows() != basis.n1() + 1 || u0_coeffs.cols() != basis.n2() + 1)
    throw std::invalid_argument("TBCSolver: u0 coefficient shape mismatch");

  m1_ = basis.op1.mass.cast<Complex>();
  m2_ = basis.op2.mass.cast<Complex>();
  s1_ = basis.op1.stiffness.cast<Complex>();
  s2_ = basis.op2.stiffness.cast<Complex>();
  u_ = u0_coeffs;

  const Real rho = cq_rho(cfg.stepper, cfg.dt);
  alpha1_ = std::sqrt(rho / basis.dom.beta1) * phase_m4;
  alpha2_ = std::sqrt(rho / basis.dom.beta2) * phase_m4;

  Real coef_plus = 1.0;
  if (cfg.variant == TbcVariant::NP) {
    pc_ = discrete_pade(cfg.stepper, cfg.dt, basis.dom.beta1, basis.dom.beta2,
                        cfg.pade_order);
    coef_plus = pc_.varpi_plus_eff();
    phi1_.assign(cfg.pade_order, CMatrix::Zero(2, basis.n2() + 1));
    phi2_.assign(cfg.pade_order, CMatrix::Zero(basis.n1() + 1, 2));
    for (auto& c : cpsi_) c = CMatrix::Zero(cfg.pade_order, cfg.pade_order);
  }

  lhs_op_ = tbc_lhs_operator(basis, alpha1_, alpha2_, coef_plus);
  main_ = std::make_unique<FactoredOperator>(lhs_op_);

  const Complex ia1 = 1.0 / alpha1_, ia2 = 1.0 / alpha2_;
  const CMatrix l1 = basis.op1.lambda().cast<Complex>();
  const CMatrix l2 = basis.op2.lambda().cast<Complex>();
  left_ = FactoredDense(m1_ + ia1 * ia1 * s1_ + coef_plus * ia1 * l1);
  right_ = FactoredDense(m2_ + ia2 * ia2 * s2_ + coef_plus * ia2 * l2);

  if (cfg.variant == TbcVariant::CQ) {
    grow_corner_tables(8);
    seed_diagonal(u_);
    b_prev_ = CMatrix::Zero(basis.n1() + 1, basis.n2() + 1);
  }
}

void TBCSolver::ensure_weights(int count) {
  if (static_cast<int>(wp_.size()) >= count) return;
  const int cap = std::max(count, static_cast<int>(wp_.size()) * 2 + 16);
  wp_ = cq_weights(cfg_.stepper, 0.5, cap, cfg_.dt).w;
}

void TBCSolver::grow_corner_tables(int need) {
  const int cur = psi_[0].rows() > 0 ? static_cast<int>(psi_[0].rows()) : 0;
  if (cur >= need) return;
  const int cap = std::max(need, 2 * cur);
  for (auto& t : psi_) {
    CMatrix grown = CMatrix::Zero(cap, cap);
    if (cur > 0) grown.topLeftCorner(cur, cur) = t;
    t = std::move(grown);
  }
}

void TBCSolver::seed_diagonal(const CMatrix& u) {
  rows_.push_back(u.topRows(2));
  cols_.push_back(u.leftCols(2));
  const int j = static_cast<int>(rows_.size()) - 1;
  grow_corner_tables(j + 1);
  for (int c = 0; c < 4; ++c) psi_[c](j, j) = u(corner_row(c), corner_col(c));
}

CMatrix TBCSolver::rank_boundary(const std::array<CVector, 4>& seg) const {
  CMatrix b = CMatrix::Zero(basis_.n1() + 1, basis_.n2() + 1);
  b.row(0) += (m2_ * seg[kLeft]).transpose() / alpha1_;
  b.row(1) += (m2_ * seg[kRight]).transpose() / alpha1_;
  b.col(0) += (m1_ * seg[kBottom]) / alpha2_;
  b.col(1) += (m1_ * seg[kTop]) / alpha2_;
  return b;
}

void TBCSolver::step_cq() {
  const int j = step_;
  const bool tr = (cfg_.stepper == Stepper::TR);
  ensure_weights(j + 2);
  grow_corner_tables(j + 2);

  // corner-history sums at a fixed (tau_1 or tau_2) grid line
  auto corner_sum = [&](bool row_family, int line, int steps, int offset) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (int k = 1; k <= steps; ++k) {
      const Real w = wp_(offset - k);
      for (int c = 0; c < 4; ++c) {
        const Complex v = row_family ? psi_[c](line, k) : psi_[c](k, line);
        acc(corner_row(c), corner_col(c)) += w * v;
      }
    }
    return acc;
  };

  // advance all column fields in tau_1, then all row fields in tau_2
  for (int p = 0; p <= j; ++p) {
    Eigen::Matrix2cd hist = corner_sum(false, p, j, j + 1);
    if (tr) hist = 0.5 * (hist + corner_sum(false, p, j - 1 >= 0 ? j - 1 : 0, j));
    CMatrix rhs = m1_ * cols_[p];
    rhs.block<2, 2>(0, 0) -= hist / alpha1_;
    const CMatrix sol = left_.solve_left(rhs);
    cols_[p] = tr ? CMatrix(2.0 * sol - cols_[p]) : sol;
    for (int c = 0; c < 4; ++c)
      psi_[c](j + 1, p) = cols_[p](corner_row(c), corner_col(c));
  }
  for (int q = 0; q <= j; ++q) {
    Eigen::Matrix2cd hist = corner_sum(true, q, j, j + 1);
    if (tr) hist = 0.5 * (hist + corner_sum(true, q, j - 1 >= 0 ? j - 1 : 0, j));
    CMatrix rhs = rows_[q] * m2_;
    rhs.block<2, 2>(0, 0) -= hist / alpha2_;
    const CMatrix sol = right_.solve_right(rhs);
    rows_[q] = tr ? CMatrix(2.0 * sol - rows_[q]) : sol;
    for (int c = 0; c < 4; ++c)
      psi_[c](q, j + 1) = rows_[q](corner_row(c), corner_col(c));
  }

  // main history from the freshly advanced samples
  CMatrix srows = CMatrix::Zero(2, basis_.n2() + 1);
  CMatrix scols = CMatrix::Zero(basis_.n1() + 1, 2);
  for (int k = 1; k <= j; ++k) {
    srows += wp_(j + 1 - k) * rows_[k];
    scols += wp_(j + 1 - k) * cols_[k];
  }
  CMatrix b_new = CMatrix::Zero(basis_.n1() + 1, basis_.n2() + 1);
  b_new.topRows(2) += (srows * m2_) / alpha1_;
  b_new.leftCols(2) += (m1_ * scols) / alpha2_;

  const CMatrix b_used = tr ? CMatrix(0.5 * (b_new + b_prev_)) : b_new;
  const CMatrix sol = main_->solve(m1_ * u_ * m2_ - b_used);
  u_ = tr ? CMatrix(2.0 * sol - u_) : sol;

  seed_diagonal(u_);
  b_prev_ = b_new;
  ++step_;
}

void TBCSolver::step_np_bdf1() {
  const int K = cfg_.pade_order;
  const Real rho = pc_.rho;
  const Real s = 1.0 / std::sqrt(rho);
  Vector bg(K);
  for (int k = 0; k < K; ++k) bg(k) = pc_.pade.b(k) * pc_.g_diag(k);

  // Step 1: one-step segment solves for the off-diagonal auxiliary fields
  std::vector<CMatrix> a2off(K), a1off(K);
  for (int kp = 0; kp < K; ++kp) {
    CMatrix rhs = m1_ * phi2_[kp];
    for (int c = 0; c < 4; ++c) {
      Complex acc = 0;
      for (int k = 0; k < K; ++k) acc += bg(k) * cpsi_[c](k, kp);
      rhs(corner_row(c), corner_col(c)) += s / alpha1_ * acc;
    }
    a2off[kp] = left_.solve_left(rhs);
  }
  for (int k = 0; k < K; ++k) {
    CMatrix rhs = phi1_[k] * m2_;
    for (int c = 0; c < 4; ++c) {
      Complex acc = 0;
      for (int kp = 0; kp < K; ++kp) acc += cpsi_[c](k, kp) * bg(kp);
      rhs(corner_row(c), corner_col(c)) += s / alpha2_ * acc;
    }
    a1off[k] = right_.solve_right(rhs);
  }

  // Step 2: per-segment history sums
  const Vector gp = pc_.gamma_plus_eff();
  std::array<CVector, 4> bhat;
  bhat[kLeft] = CVector::Zero(basis_.n2() + 1);
  bhat[kRight] = CVector::Zero(basis_.n2() + 1);
  bhat[kBottom] = CVector::Zero(basis_.n1() + 1);
  bhat[kTop] = CVector::Zero(basis_.n1() + 1);
  for (int k = 0; k < K; ++k) {
    bhat[kLeft] += gp(k) * a1off[k].row(0).transpose();
    bhat[kRight] += gp(k) * a1off[k].row(1).transpose();
    bhat[kBottom] += gp(k) * a2off[k].col(0);
    bhat[kTop] += gp(k) * a2off[k].col(1);
  }

  // Step 3: main solve
  u_ = main_->solve(m1_ * u_ * m2_ + rank_boundary(bhat));

  // Step 4: diagonal updates and the corner chain C^{j,j} -> C^{j,j+1} -> C^{j+1,j+1}
  const CMatrix utop = u_.topRows(2);
  const CMatrix ucols = u_.leftCols(2);
  for (int k = 0; k < K; ++k) {
    phi1_[k] = pc_.g_diag(k) * (utop / rho + a1off[k]);
    phi2_[k] = pc_.g_diag(k) * (ucols / rho + a2off[k]);
  }
  const CVector g_c = pc_.g_diag.cast<Complex>();
  for (int c = 0; c < 4; ++c) {
    CVector a1c(K), p2c(K);
    for (int k = 0; k < K; ++k) a1c(k) = a1off[k](corner_row(c), corner_col(c));
    for (int k = 0; k < K; ++k) p2c(k) = phi2_[k](corner_row(c), corner_col(c));
    const CMatrix cmid =
        (cpsi_[c] + a1c * CVector::Ones(K).transpose() / rho) * g_c.asDiagonal();
    cpsi_[c] =
        g_c.asDiagonal() * (cmid + CVector::Ones(K) * p2c.transpose() / rho);
  }
  ++step_;
}

void TBCSolver::step_np_tr() {
  const int K = cfg_.pade_order;
  const Real rho = pc_.rho;
  const Real s = 1.0 / std::sqrt(rho);
  Vector bg(K);
  for (int k = 0; k < K; ++k) bg(k) = pc_.pade.b(k) * pc_.g_diag(k);

  const CMatrix utop_old = u_.topRows(2);    // Phi_1^{j,j}
  const CMatrix ucols_old = u_.leftCols(2);  // Phi_2^{j,j}

  // Step 1: half-step segment solves, then the full-step reconstructions
  std::vector<CMatrix> a2mid(K), a1mid(K), a2off(K), a1off(K);
  for (int kp = 0; kp < K; ++kp) {
    CMatrix rhs = m1_ * phi2_[kp];
    for (int c = 0; c < 4; ++c) {
      Complex acc = 0;
      for (int k = 0; k < K; ++k) acc += bg(k) * cpsi_[c](k, kp);
      rhs(corner_row(c), corner_col(c)) += s / alpha1_ * acc;
    }
    a2mid[kp] = left_.solve_left(rhs);
    a2off[kp] = 2.0 * a2mid[kp] - phi2_[kp];
  }
  for (int k = 0; k < K; ++k) {
    CMatrix rhs = phi1_[k] * m2_;
    for (int c = 0; c < 4; ++c) {
      Complex acc = 0;
      for (int kp = 0; kp < K; ++kp) acc += cpsi_[c](k, kp) * bg(kp);
      rhs(corner_row(c), corner_col(c)) += s / alpha2_ * acc;
    }
    a1mid[k] = right_.solve_right(rhs);
    a1off[k] = 2.0 * a1mid[k] - phi1_[k];
  }

  CMatrix rhs2 = m1_ * ucols_old;
  for (int c = 0; c < 4; ++c) {
    Complex acc = 0;
    for (int k = 0; k < K; ++k) acc += bg(k) * phi1_[k](corner_row(c), corner_col(c));
    rhs2(corner_row(c), corner_col(c)) += s / alpha1_ * acc;
  }
  const CMatrix phi2mid = left_.solve_left(rhs2);
  const CMatrix phi2off = 2.0 * phi2mid - ucols_old;  // Phi_2^{j+1,j}

  CMatrix rhs1 = utop_old * m2_;
  for (int c = 0; c < 4; ++c) {
    Complex acc = 0;
    for (int kp = 0; kp < K; ++kp) acc += bg(kp) * phi2_[kp](corner_row(c), corner_col(c));
    rhs1(corner_row(c), corner_col(c)) += s / alpha2_ * acc;
  }
  const CMatrix phi1mid = right_.solve_right(rhs1);
  const CMatrix phi1off = 2.0 * phi1mid - utop_old;  // Phi_1^{j,j+1}

  // Step 2: midpoint history sums
  const Real bg1 = bg.sum();
  const CMatrix d1 = 0.5 * (phi1off - utop_old);
  const CMatrix d2 = 0.5 * (phi2off - ucols_old);
  std::array<CVector, 4> bhat;
  bhat[kLeft] = s * (bg1 / rho) * d1.row(0).transpose();
  bhat[kRight] = s * (bg1 / rho) * d1.row(1).transpose();
  bhat[kBottom] = s * (bg1 / rho) * d2.col(0);
  bhat[kTop] = s * (bg1 / rho) * d2.col(1);
  for (int k = 0; k < K; ++k) {
    const Real bh = pc_.pade.b(k) * pc_.h_diag(k);
    const Real bb = pc_.pade.b(k);
    bhat[kLeft] += 0.5 * s * (bh * a1off[k].row(0) + bb * phi1_[k].row(0)).transpose();
    bhat[kRight] += 0.5 * s * (bh * a1off[k].row(1) + bb * phi1_[k].row(1)).transpose();
    bhat[kBottom] += 0.5 * s * (bh * a2off[k].col(0) + bb * phi2_[k].col(0));
    bhat[kTop] += 0.5 * s * (bh * a2off[k].col(1) + bb * phi2_[k].col(1));
  }

  // Step 3: midpoint main solve and reconstruction
  const CMatrix v = main_->solve(m1_ * u_ * m2_ + rank_boundary(bhat));
  u_ = 2.0 * v - u_;

  // Step 4: diagonal updates then the corner chain
  const CMatrix vtop = v.topRows(2);
  const CMatrix vcols = v.leftCols(2);
  for (int k = 0; k < K; ++k) {
    phi1_[k] = pc_.h_diag(k) * a1off[k] + (2.0 / rho) * pc_.g_diag(k) * (vtop + d1);
    phi2_[k] = pc_.h_diag(k) * a2off[k] + (2.0 / rho) * pc_.g_diag(k) * (vcols + d2);
  }
  const CVector g_c = pc_.g_diag.cast<Complex>();
  const CVector h_c = pc_.h_diag.cast<Complex>();
  for (int c = 0; c < 4; ++c) {
    const int r = corner_row(c), cc = corner_col(c);
    CVector a1midc(K), a2offc(K), p2c(K);
    for (int k = 0; k < K; ++k) a1midc(k) = a1mid[k](r, cc);
    for (int k = 0; k < K; ++k) a2offc(k) = a2off[k](r, cc);
    for (int k = 0; k < K; ++k) p2c(k) = phi2_[k](r, cc);
    const CMatrix cj1 = cpsi_[c] * h_c.asDiagonal() +
                        (2.0 / rho) * a1midc * g_c.transpose();
    cpsi_[c] = h_c.asDiagonal() * cj1 +
               (2.0 / rho) * g_c * (0.5 * (p2c + a2offc)).transpose();
  }
  ++step_;
}

void TBCSolver::step() {
  if (cfg_.variant == TbcVariant::CQ)
    step_cq();
  else if (cfg_.stepper == Stepper::BDF1)
    step_np_bdf1();
  else
    step_np_tr();
}

void TBCSolver::run(int n_steps, const std::function<void(const TBCSolver&)>& per_step) {
  for (int i = 0; i < n_steps; ++i) {
    step();
    if (per_step) per_step(*this);
  }
}

std::size_t TBCSolver::state_size() const {
  std::size_t n = 0;
  if (cfg_.variant == TbcVariant::CQ) {
    for (const auto& r : rows_) n += r.size();
    for (const auto& c : cols_) n += c.size();
  } else {
    for (const auto& r : phi1_) n += r.size();
    for (const auto& c : phi2_) n += c.size();
    for (const auto& c : cpsi_) n += c.size();
  }
  return n;
}

std::size_t TBCSolver::corner_table_entries() const {
  if (cfg_.variant != TbcVariant::CQ) return 0;
  const std::size_t filled = rows_.size();
  return 4 * filled * filled;
}

long TBCSolver::lin1d_solve_count() const {
  return left_.solve_count() + right_.solve_count();
}

}  // namespace tbc2d
