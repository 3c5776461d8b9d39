#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "prewavelet/assembly.hpp"
#include "prewavelet/linalg.hpp"
#include "prewavelet/prewavelet_basis.hpp"
#include "prewavelet/quadrature.hpp"

namespace pw = prewavelet;

namespace {

std::vector<std::vector<double>> dense_rows(const pw::SparseMatrix& a) {
  const auto flat = a.to_dense();
  std::vector<std::vector<double>> rows(a.rows(), std::vector<double>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) rows[r][c] = flat[r * a.cols() + c];
  return rows;
}

pw::Vector ones_load(int level) {
  return pw::load_vector(level, [](double, double) { return 1.0; });
}

}  // namespace

TEST(Cholesky, OneByOne) {
  const auto a = pw::SparseMatrix::from_triplets(1, 1, {{0, 0, 4.0}});
  EXPECT_DOUBLE_EQ(pw::cholesky_solve(a, pw::Vector{1.0}).x[0], 0.25);
}

TEST(Cholesky, Identity) {
  std::vector<pw::Triplet> t;
  for (std::size_t i = 0; i < 5; ++i) t.push_back({i, i, 1.0});
  const auto a = pw::SparseMatrix::from_triplets(5, 5, t);
  const pw::Vector b{1.0, -2.0, 3.0, 0.5, 0.0};
  EXPECT_EQ(pw::cholesky_solve(a, b).x, b);
}

TEST(Cholesky, MatchesDenseEliminationOnStiffness) {
  for (int j = 1; j <= 4; ++j) {
    const auto d = pw::stiffness_matrix(j);
    const auto f = ones_load(j);
    const auto x = pw::cholesky_solve(d, f).x;
    const auto ref = oracle::gauss_solve(dense_rows(d), f);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], ref[i], 1e-12) << "j=" << j;
  }
}

TEST(Cholesky, RejectsIndefiniteMatrices) {
  const auto a = pw::SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
  EXPECT_THROW(pw::cholesky_solve(a, pw::Vector{1.0, 1.0}), pw::NotPositiveDefinite);
  const auto neg = pw::SparseMatrix::from_triplets(1, 1, {{0, 0, -1.0}});
  EXPECT_THROW(pw::SparseCholesky{neg}, pw::NotPositiveDefinite);
}

TEST(Cholesky, RejectsDimensionMismatch) {
  const auto d = pw::stiffness_matrix(2);
  EXPECT_THROW(pw::cholesky_solve(d, pw::Vector(3)), std::invalid_argument);
  EXPECT_THROW(pw::cholesky_solve(pw::SparseMatrix(2, 3), pw::Vector(2)), std::invalid_argument);
}

TEST(Cholesky, ResidualSmallOnStiffnessAndWaveletGram) {
  for (int j = 1; j <= 6; ++j) {
    const auto d = pw::stiffness_matrix(j);
    EXPECT_LE(pw::cholesky_solve(d, ones_load(j)).report.relative_residual, 1e-12) << "D j=" << j;
    const auto c = pw::wavelet_matrix(j);
    const auto e = pw::wavelet_gram(c, pw::stiffness_matrix(j + 1));
    const auto b = pw::wavelet_load(c, ones_load(j + 1));
    EXPECT_LE(pw::cholesky_solve(e, b).report.relative_residual, 1e-12) << "E j=" << j;
  }
}

TEST(Cg, AgreesWithCholesky) {
  const auto d = pw::stiffness_matrix(3);
  const auto f = ones_load(3);
  pw::CgOptions opt;
  opt.tolerance = 1e-13;
  const auto cg = pw::cg_solve(d, f, opt);
  EXPECT_TRUE(cg.report.converged);
  EXPECT_LE(cg.report.relative_residual, 1e-12);
  const auto direct = pw::cholesky_solve(d, f).x;
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(cg.x[i], direct[i], 1e-10);
}

TEST(Cg, ZeroRightHandSide) {
  const auto d = pw::stiffness_matrix(3);
  const auto r = pw::cg_solve(d, pw::Vector(d.rows(), 0.0));
  EXPECT_EQ(r.report.iterations, 0u);
  EXPECT_TRUE(r.report.converged);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}

TEST(Cg, IterationsGrowAsToleranceTightens) {
  const auto d = pw::stiffness_matrix(5);
  const auto f = pw::load_vector(5, [](double x, double y) { return std::sin(3.0 * x) + y; });
  std::size_t prev = 0;
  for (double tol : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    pw::CgOptions opt;
    opt.tolerance = tol;
    const auto r = pw::cg_solve(d, f, opt);
    EXPECT_TRUE(r.report.converged);
    EXPECT_GE(r.report.iterations, prev) << "tol " << tol;
    EXPECT_LE(r.report.relative_residual, tol * 1.01);
    prev = r.report.iterations;
  }
}

TEST(Cg, IterationsGrowWithLevel) {
  std::size_t prev = 0;
  for (int j = 2; j <= 6; ++j) {
    const auto r = pw::cg_solve(pw::stiffness_matrix(j), ones_load(j));
    EXPECT_GT(r.report.iterations, prev) << "j=" << j;
    prev = r.report.iterations;
  }
}

TEST(Cg, FlagsNonConvergence) {
  pw::CgOptions opt;
  opt.tolerance = 1e-14;
  opt.max_iterations = 2;
  const auto r = pw::cg_solve(pw::stiffness_matrix(5), ones_load(5), opt);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 2u);
  EXPECT_GT(r.report.relative_residual, 1e-14);
}

TEST(Cg, RejectsBadInput) {
  const auto d = pw::stiffness_matrix(2);
  EXPECT_THROW(pw::cg_solve(d, pw::Vector(4)), std::invalid_argument);
  pw::CgOptions opt;
  opt.tolerance = 0.0;
  EXPECT_THROW(pw::cg_solve(d, pw::Vector(9, 1.0), opt), std::invalid_argument);
  const auto indefinite = pw::SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  EXPECT_THROW(pw::cg_solve(indefinite, pw::Vector{0.0, 1.0}), pw::NotPositiveDefinite);
}

TEST(Cg, JacobiPreconditionerOnWaveletGram) {
  const int j = 4;
  const auto c = pw::wavelet_matrix(j);
  const auto e = pw::wavelet_gram(c, pw::stiffness_matrix(j + 1));
  const auto b = pw::wavelet_load(c, ones_load(j + 1));
  pw::CgOptions plain, jac;
  plain.tolerance = jac.tolerance = 1e-12;
  jac.jacobi = true;
  const auto r1 = pw::cg_solve(e, b, plain), r2 = pw::cg_solve(e, b, jac);
  EXPECT_TRUE(r1.report.converged);
  EXPECT_TRUE(r2.report.converged);
  const auto direct = pw::cholesky_solve(e, b).x;
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(r1.x[i], direct[i], 1e-9);
    EXPECT_NEAR(r2.x[i], direct[i], 1e-9);
  }
}
