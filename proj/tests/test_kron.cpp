#include <doctest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "tbc2d/kron.hpp"

using namespace tbc2d;

namespace {

std::mt19937 gen(23);

CMatrix random_matrix(int r, int c) {
  std::uniform_real_distribution<Real> dist(-1, 1);
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(dist(gen), dist(gen));
  return m;
}

KronOperator random_operator(int n1, int n2, int terms) {
  KronOperator op;
  std::uniform_real_distribution<Real> dist(-1, 1);
  for (int t = 0; t < terms; ++t)
    op.terms.push_back({Complex(dist(gen), dist(gen)), random_matrix(n1, n1),
                        random_matrix(n2, n2)});
  // keep the assembled matrix comfortably nonsingular
  op.terms.push_back({Complex(4.0, 0.0), CMatrix::Identity(n1, n1),
                      CMatrix::Identity(n2, n2)});
  return op;
}

}  // namespace

TEST_CASE("identity operator solves trivially") {
  KronOperator op;
  op.terms.push_back({1.0, CMatrix::Identity(4, 4), CMatrix::Identity(3, 3)});
  FactoredOperator f(op);
  const CMatrix rhs = random_matrix(4, 3);
  CHECK((f.solve(rhs) - rhs).norm() < 1e-14);
}

TEST_CASE("diagonal Sylvester structure") {
  // terms (1, A, I), (1, I, D): X_pq = F_pq / (A_pp + D_qq)
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 4.0;
  KronOperator op;
  op.terms.push_back({1.0, a, CMatrix::Identity(2, 2)});
  op.terms.push_back({1.0, CMatrix::Identity(2, 2), d});
  FactoredOperator f(op);
  const CMatrix rhs = random_matrix(2, 2);
  const CMatrix x = f.solve(rhs);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      CHECK(std::abs(x(p, q) - rhs(p, q) / (a(p, p) + d(q, q))) < 1e-13);
}

TEST_CASE("vectorization identity: matrix action equals Kronecker action") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n1 = 3 + trial % 6, n2 = 2 + trial % 7;
    const KronOperator op = random_operator(n1, n2, 3);
    const CMatrix x = random_matrix(n1, n2);
    const CMatrix lx = op.apply(x);

    CMatrix dense = CMatrix::Zero(n1 * n2, n1 * n2);
    for (const auto& t : op.terms)
      dense += t.coeff *
               Eigen::kroneckerProduct(t.right.transpose(), t.left).eval();
    const Eigen::Map<const CVector> xv(x.data(), x.size());
    const CVector lv = dense * xv;
    const Eigen::Map<const CVector> lxv(lx.data(), lx.size());
    CHECK((lv - lxv).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((CMatrix(op.assemble_sparse()) - dense).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("random systems match the dense Kronecker-inverse oracle") {
  for (int trial = 0; trial < 5; ++trial) {
    const int n1 = 6, n2 = 5;
    const KronOperator op = random_operator(n1, n2, 4);
    const CMatrix rhs = random_matrix(n1, n2);
    FactoredOperator f(op);
    const CMatrix x = f.solve(rhs);

    const CMatrix dense = op.dense();
    const Eigen::Map<const CVector> fv(rhs.data(), rhs.size());
    const CVector xv = Eigen::PartialPivLU<CMatrix>(dense).solve(fv);
    const Eigen::Map<const CVector> got(x.data(), x.size());
    CHECK((got - xv).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(f.residual(x, rhs) < 1e-10);
  }
}

TEST_CASE("factorization happens once per operator across many solves") {
  const KronOperator op = random_operator(5, 5, 2);
  const long before = FactoredOperator::total_factorizations();
  FactoredOperator f(op);
  for (int i = 0; i < 100; ++i) {
    const CMatrix rhs = random_matrix(5, 5);
    const CMatrix x = f.solve(rhs);
    CHECK(f.residual(x, rhs) < 1e-10);
  }
  CHECK(FactoredOperator::total_factorizations() - before == 1);
  CHECK(f.solve_count() == 100);
}

TEST_CASE("singular operator is rejected") {
  KronOperator op;
  op.terms.push_back({1.0, CMatrix::Zero(3, 3), CMatrix::Identity(3, 3)});
  CHECK_THROWS(FactoredOperator(op));
}

TEST_CASE("one-dimensional solves") {
  const CMatrix eye = CMatrix::Identity(5, 5);
  const CMatrix f = random_matrix(5, 3);
  CHECK((solve_1d_left(eye, f) - f).norm() < 1e-14);

  const CMatrix a = random_matrix(5, 5) + 4.0 * eye;
  const CMatrix x = solve_1d_left(a, f);
  CHECK((a * x - f).norm() / f.norm() < 1e-12);

  const CMatrix b = random_matrix(3, 3) + 4.0 * CMatrix::Identity(3, 3);
  const CMatrix y = solve_1d_right(b, f);
  CHECK((y * b - f).norm() / f.norm() < 1e-12);
  // transpose identity
  const CMatrix y2 = solve_1d_left(b.transpose(), f.transpose()).transpose();
  CHECK((y - y2).norm() < 1e-13);

  CHECK_THROWS(solve_1d_left(CMatrix::Zero(3, 3), random_matrix(3, 2)));
}

TEST_CASE("cached dense factorization") {
  const CMatrix a = random_matrix(6, 6) + 5.0 * CMatrix::Identity(6, 6);
  FactoredDense f(a);
  const CMatrix rhs = random_matrix(6, 4);
  CHECK((a * f.solve_left(rhs) - rhs).norm() < 1e-11);
  const CMatrix rhs2 = random_matrix(4, 6);
  CHECK((f.solve_right(rhs2) * a - rhs2).norm() < 1e-11);
  CHECK(f.solve_count() == 2);
}
