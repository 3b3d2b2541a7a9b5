#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "tbc2d/types.hpp"

namespace tbc2d {

// Sum-of-Kronecker-products operator  L(X) = sum_i c_i A_i X B_i acting on an
// n1 x n2 coefficient matrix. With column-major vectorization its matrix form
// is sum_i c_i (B_i^T kron A_i).
struct KronTerm {
  Complex coeff;
  CMatrix left;   // A_i, n1 x n1
  CMatrix right;  // B_i, n2 x n2
};

struct KronOperator {
  std::vector<KronTerm> terms;

  int rows() const { return terms.empty() ? 0 : static_cast<int>(terms[0].left.rows()); }
  int cols() const { return terms.empty() ? 0 : static_cast<int>(terms[0].right.rows()); }

  CMatrix apply(const CMatrix& x) const;
  Eigen::SparseMatrix<Complex> assemble_sparse(Real drop_tol = 0.0) const;
  CMatrix dense() const;  // materialized sum_i c_i (B_i^T kron A_i); oracle path
  void check_consistent() const;
};

// Factor-once / solve-many wrapper around a sparse LU of the assembled matrix.
class FactoredOperator {
 public:
  explicit FactoredOperator(const KronOperator& op);

  CMatrix solve(const CMatrix& rhs) const;
  Real residual(const CMatrix& x, const CMatrix& rhs) const;

  long solve_count() const { return solves_; }
  static long total_factorizations() { return factorizations_.load(); }

 private:
  KronOperator op_;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu_;
  int n1_ = 0, n2_ = 0;
  mutable long solves_ = 0;
  static std::atomic<long> factorizations_;
};

// Direct small solves A X = F and X B = F (the latter via the transposed system).
CMatrix solve_1d_left(const CMatrix& a, const CMatrix& f);
CMatrix solve_1d_right(const CMatrix& b, const CMatrix& f);

// Cached LU for the per-step one-dimensional boundary systems.
class FactoredDense {
 public:
  FactoredDense() = default;
  explicit FactoredDense(const CMatrix& a);

  CMatrix solve_left(const CMatrix& f) const;   // A X = F
  CMatrix solve_right(const CMatrix& f) const;  // X A = F
  long solve_count() const { return solves_; }

 private:
  Eigen::PartialPivLU<CMatrix> lu_;
  mutable long solves_ = 0;
};

}  // namespace tbc2d
