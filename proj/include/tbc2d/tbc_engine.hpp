#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tbc2d/kron.hpp"
#include "tbc2d/operators.hpp"
#include "tbc2d/rational.hpp"

namespace tbc2d {

enum class TbcVariant { CQ, NP };

// Corner order used for all 2x2 corner blocks: the index pairs are the
// coefficient positions (0,0), (1,0), (0,1), (1,1).
enum Corner { kLB = 0, kRB = 1, kLT = 2, kRT = 3 };

struct TBCConfig {
  TbcVariant variant = TbcVariant::NP;
  Stepper stepper = Stepper::BDF1;  // BDF1 or TR
  int pade_order = 30;              // NP only
  Real dt = 1e-3;
  Real t_max = 1.0;
};

// Five-term LHS of the discrete exact-TBC system: mass-mass, the two
// stiffness terms and the two boundary terms (weight 1 for CQ, the scaled
// varpi^{(1/2)} for NP). No boundary-stiffness cross terms and no corner term.
KronOperator tbc_lhs_operator(const Basis2D& basis, Complex alpha1, Complex alpha2,
                              Real coef_plus);

// Time stepper for the exact transparent boundary condition.
//
// CQ variant: keeps every off-diagonal sample of the two-time auxiliary field
// (one row pair per tau_1 grid line, one column pair per tau_2 grid line) and
// advances all of them one step per time step; corner values of both families
// are recorded in four (tau_1, tau_2) tables, each family filling the triangle
// the other one needs (values at a corner are shared with the adjacent
// segment). Per-step work grows linearly with the step count and the corner
// tables quadratically, which is the cost profile that motivates the NP form.
//
// NP variant: carries only the diagonal auxiliary fields (K row pairs, K
// column pairs) plus the K x K corner fields, so the state is independent of
// the step count.
class TBCSolver {
 public:
  TBCSolver(const TBCConfig& cfg, const Basis2D& basis, const CMatrix& u0_coeffs);

  void step();
  void run(int n_steps, const std::function<void(const TBCSolver&)>& per_step = {});

  const CMatrix& coeffs() const { return u_; }
  int step_index() const { return step_; }
  Real time() const { return step_ * cfg_.dt; }
  const TBCConfig& config() const { return cfg_; }
  const Basis2D& basis() const { return basis_; }

  // complex scalars in the segment-field state (corner tables excluded; the
  // CQ corner history is quadratic in the step count and reported separately)
  std::size_t state_size() const;
  std::size_t corner_table_entries() const;
  long lin1d_solve_count() const;

  const KronOperator& lhs_operator() const { return lhs_op_; }
  const DiscretePadeCoeffs& pade_coeffs() const { return pc_; }

  // NP internals (transcription-oracle tests)
  const std::vector<CMatrix>& aux_row_fields() const { return phi1_; }
  const std::vector<CMatrix>& aux_col_fields() const { return phi2_; }
  const std::array<CMatrix, 4>& corner_fields() const { return cpsi_; }

  // CQ internals
  const std::vector<CMatrix>& history_rows() const { return rows_; }
  const std::vector<CMatrix>& history_cols() const { return cols_; }
  Complex corner_sample(Corner c, int k, int m) const { return psi_[c](k, m); }

 private:
  void step_cq();
  void step_np_bdf1();
  void step_np_tr();
  void ensure_weights(int count);
  void seed_diagonal(const CMatrix& u);
  void grow_corner_tables(int need);
  CMatrix rank_boundary(const std::array<CVector, 4>& seg) const;

  TBCConfig cfg_;
  const Basis2D& basis_;
  CMatrix m1_, m2_, s1_, s2_;
  CMatrix u_;
  int step_ = 0;

  Complex alpha1_, alpha2_;
  KronOperator lhs_op_;
  std::unique_ptr<FactoredOperator> main_;
  FactoredDense left_, right_;  // one-dimensional segment operators

  // CQ state
  Vector wp_;
  std::vector<CMatrix> rows_;  // 2 x (N2+1) per tau_1 grid line
  std::vector<CMatrix> cols_;  // (N1+1) x 2 per tau_2 grid line
  std::array<CMatrix, 4> psi_;
  CMatrix b_prev_;

  // NP state
  DiscretePadeCoeffs pc_;
  std::vector<CMatrix> phi1_;      // K row pairs
  std::vector<CMatrix> phi2_;      // K column pairs
  std::array<CMatrix, 4> cpsi_;    // K x K per corner
};

}  // namespace tbc2d
