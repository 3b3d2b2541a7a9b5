#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tbc2d/kron.hpp"
#include "tbc2d/operators.hpp"
#include "tbc2d/rational.hpp"

namespace tbc2d {

enum class HfVariant { CQ, CP };

struct HFConfig {
  HfVariant variant = HfVariant::CQ;
  Stepper stepper = Stepper::BDF1;
  int pade_order = 30;  // CP only
  Real dt = 1e-3;
  Real t_max = 1.0;
};

// LHS of the fully discrete high-frequency system: eight Kronecker terms
// (mass-mass, the two stiffness terms, the two boundary terms, the two
// boundary-stiffness cross terms and the corner term 3/(4 a1 a2) L1 X L2).
// coef_plus/coef_minus are 1 for the CQ family and the scheme-scaled
// varpi^{(+-1/2)} for the Pade family.
KronOperator hf_lhs_operator(const Basis2D& basis, Complex alpha1, Complex alpha2,
                             Real coef_plus, Real coef_minus);

// Time stepper for the high-frequency IBVP. The CQ variants keep the full
// segment-trace history; the CP variants carry K+1 auxiliary vectors per
// segment. BDF2 bootstraps its first step with the BDF1 scheme of the same
// family.
class HFSolver {
 public:
  HFSolver(const HFConfig& cfg, const Basis2D& basis, const CMatrix& u0_coeffs);

  void step();
  void run(int n_steps, const std::function<void(const HFSolver&)>& per_step = {});

  const CMatrix& coeffs() const { return u_; }
  int step_index() const { return step_; }
  Real time() const { return step_ * cfg_.dt; }
  const HFConfig& config() const { return cfg_; }
  const Basis2D& basis() const { return basis_; }

  // complex scalars held in the history / auxiliary state
  std::size_t state_size() const;

  const KronOperator& lhs_operator() const { return lhs_op_; }
  const DiscretePadeCoeffs& pade_coeffs() const { return cp_; }

 private:
  void step_cq();
  void step_cp();
  void ensure_weights(int count);
  std::array<CVector, 4> trace_of(const CMatrix& u) const;
  void push_trace(const CMatrix& u);
  CMatrix rank_boundary(const std::array<CVector, 4>& seg, Complex c1, Complex c2,
                        const CMatrix& right, const CMatrix& left) const;

  HFConfig cfg_;
  const Basis2D& basis_;
  CMatrix m1_, m2_, s1_, s2_;
  CMatrix u_, u_prev_;
  int step_ = 0;

  Complex alpha1_, alpha2_;
  KronOperator lhs_op_;
  std::unique_ptr<FactoredOperator> lhs_;
  std::unique_ptr<FactoredOperator> lhs_start_;  // BDF1 bootstrap (BDF2 only)
  Complex alpha1_start_, alpha2_start_;

  Vector wp_, wm_;  // CQ weights for nu = +1/2 / -1/2
  std::array<std::vector<CVector>, 4> trace_;

  DiscretePadeCoeffs cp_, cp_start_;
  std::array<CVector, 4> aux0_, aux0_prev_;
  std::array<std::vector<CVector>, 4> aux_, aux_prev_;
};

}  // namespace tbc2d
