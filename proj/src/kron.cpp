#include "tbc2d/kron.hpp"

#include <stdexcept>

namespace tbc2d {

void KronOperator::check_consistent() const {
  if (terms.empty()) throw std::invalid_argument("KronOperator: no terms");
  for (const auto& t : terms) {
    if (t.left.rows() != t.left.cols() || t.right.rows() != t.right.cols())
      throw std::invalid_argument("KronOperator: factors must be square");
    if (t.left.rows() != terms[0].left.rows() || t.right.rows() != terms[0].right.rows())
      throw std::invalid_argument("KronOperator: factor dimension mismatch");
  }
}

CMatrix KronOperator::apply(const CMatrix& x) const {
  check_consistent();
  if (x.rows() != rows() || x.cols() != cols())
    throw std::invalid_argument("KronOperator::apply: operand shape mismatch");
  CMatrix acc = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : terms) acc += t.coeff * t.left * x * t.right;
  return acc;
}

Eigen::SparseMatrix<Complex> KronOperator::assemble_sparse(Real drop_tol) const {
  check_consistent();
  const int n1 = rows(), n2 = cols();
  const int n = n1 * n2;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (const auto& t : terms) {
    for (int l = 0; l < n2; ++l)
      for (int q = 0; q < n2; ++q) {
        const Complex bv = t.right(l, q);
        if (bv == Complex(0)) continue;
        for (int p = 0; p < n1; ++p)
          for (int k = 0; k < n1; ++k) {
            const Complex av = t.left(p, k);
            if (av == Complex(0)) continue;
            const Complex v = t.coeff * av * bv;
            if (std::abs(v) <= drop_tol) continue;
            trip.emplace_back(p + q * n1, k + l * n1, v);
          }
      }
  }
  Eigen::SparseMatrix<Complex> mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

CMatrix KronOperator::dense() const {
  return CMatrix(assemble_sparse());
}

std::atomic<long> FactoredOperator::factorizations_{0};

FactoredOperator::FactoredOperator(const KronOperator& op) : op_(op) {
  op_.check_consistent();
  n1_ = op_.rows();
  n2_ = op_.cols();
  auto mat = op_.assemble_sparse();
  mat.makeCompressed();
  lu_.compute(mat);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("FactoredOperator: sparse LU factorization failed: " +
                             lu_.lastErrorMessage());
  ++factorizations_;
}

CMatrix FactoredOperator::solve(const CMatrix& rhs) const {
  if (rhs.rows() != n1_ || rhs.cols() != n2_)
    throw std::invalid_argument("FactoredOperator::solve: rhs shape mismatch");
  const Eigen::Map<const CVector> f(rhs.data(), rhs.size());
  CVector x = lu_.solve(f);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("FactoredOperator::solve: back-substitution failed");
  ++solves_;
  return Eigen::Map<const CMatrix>(x.data(), n1_, n2_);
}

Real FactoredOperator::residual(const CMatrix& x, const CMatrix& rhs) const {
  const Real denom = rhs.norm();
  if (denom == 0.0) return (op_.apply(x)).norm();
  return (op_.apply(x) - rhs).norm() / denom;
}

CMatrix solve_1d_left(const CMatrix& a, const CMatrix& f) {
  if (a.rows() != a.cols() || a.rows() != f.rows())
    throw std::invalid_argument("solve_1d_left: dimension mismatch");
  Eigen::PartialPivLU<CMatrix> lu(a);
  if (lu.rcond() < 1e-14)
    throw std::runtime_error("solve_1d_left: singular or severely ill-conditioned matrix"
                             " (rcond estimate " + std::to_string(lu.rcond()) + ")");
  return lu.solve(f);
}

CMatrix solve_1d_right(const CMatrix& b, const CMatrix& f) {
  return solve_1d_left(b.transpose(), f.transpose()).transpose();
}

FactoredDense::FactoredDense(const CMatrix& a) : lu_(a) {
  if (lu_.rcond() < 1e-14)
    throw std::runtime_error("FactoredDense: singular or severely ill-conditioned matrix"
                             " (rcond estimate " + std::to_string(lu_.rcond()) + ")");
}

CMatrix FactoredDense::solve_left(const CMatrix& f) const {
  ++solves_;
  return lu_.solve(f);
}

CMatrix FactoredDense::solve_right(const CMatrix& f) const {
  ++solves_;
  const CMatrix xt = lu_.transpose().solve(f.transpose());
  return xt.transpose();
}

}  // namespace tbc2d
