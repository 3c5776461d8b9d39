#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "prewavelet/assembly.hpp"
#include "prewavelet/linalg.hpp"

namespace pw = prewavelet;

namespace {

std::map<std::pair<int, int>, double> as_map(const std::vector<std::pair<pw::GridIndex, double>>& row) {
  std::map<std::pair<int, int>, double> m;
  for (const auto& [g, v] : row) m[{g.i, g.k}] = v;
  return m;
}

}  // namespace

TEST(Refinement, LevelOneRow) {
  const auto m = as_map(pw::refinement_row({1, 1, 1}));
  const std::map<std::pair<int, int>, double> expected{{{2, 2}, 1.0}, {{1, 2}, 0.5}, {{3, 2}, 0.5}, {{2, 1}, 0.5},
                                                       {{2, 3}, 0.5}, {{1, 1}, 0.5}, {{3, 3}, 0.5}};
  EXPECT_EQ(m, expected);
}

TEST(Refinement, CoarseCornerKeepsAllEntries) {
  EXPECT_EQ(pw::refinement_row({2, 1, 1}).size(), 7u);
}

TEST(Refinement, FullRowsSumToFour) {
  for (int j = 1; j <= 4; ++j)
    for (std::size_t m = 0; m < pw::num_nodes(j); ++m) {
      const auto row = pw::refinement_row(pw::inverse_index(j, m));
      double s = 0.0;
      for (const auto& e : row) s += e.second;
      EXPECT_EQ(s, 4.0);
    }
}

TEST(Refinement, MatchesHatInterpolation) {
  // The coarse hat evaluated at fine vertices gives the refinement coefficients.
  for (int j = 1; j <= 3; ++j) {
    const auto b = pw::refinement_matrix(j);
    for (std::size_t r = 0; r < b.rows(); ++r) {
      const auto c = pw::inverse_index(j, r);
      for (std::size_t col = 0; col < b.cols(); ++col) {
        const auto f = pw::inverse_index(j + 1, col);
        ASSERT_EQ(b.at(r, col), oracle::hat(j, c.i, c.k, f.x(), f.y()));
      }
    }
  }
}

TEST(Refinement, Shapes) {
  const auto b1 = pw::refinement_matrix(1);
  EXPECT_EQ(b1.rows(), 1u);
  EXPECT_EQ(b1.cols(), 9u);
  EXPECT_EQ(b1.nnz(), 7u);
  const auto b2 = pw::refinement_matrix(2);
  EXPECT_EQ(b2.rows(), 9u);
  EXPECT_EQ(b2.cols(), 49u);
  for (int j = 1; j <= 5; ++j) {
    const auto b = pw::refinement_matrix(j);
    for (std::size_t r = 0; r < b.rows(); ++r) EXPECT_LE(b.row_cols(r).size(), 7u);
  }
}

TEST(Stiffness, LevelOneIsFour) {
  const auto d = pw::stiffness_matrix(1);
  ASSERT_EQ(d.rows(), 1u);
  EXPECT_EQ(d.at(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(oracle::stiffness_entry(1, 1, 1, 1, 1), 4.0);
}

TEST(Stiffness, LevelTwoEntriesAgainstIntegration) {
  const auto d = pw::stiffness_matrix(2);
  const auto at = [&](int i1, int k1, int i2, int k2) {
    return d.at(pw::linear_index({2, i1, k1}), pw::linear_index({2, i2, k2}));
  };
  EXPECT_EQ(at(1, 1, 2, 1), -1.0);
  EXPECT_EQ(at(1, 1, 2, 2), 0.0);
  EXPECT_NEAR(oracle::stiffness_entry(2, 1, 1, 2, 1), -1.0, 1e-14);
  EXPECT_NEAR(oracle::stiffness_entry(2, 1, 1, 2, 2), 0.0, 1e-14);
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) {
      const auto a = pw::inverse_index(2, r), b = pw::inverse_index(2, c);
      EXPECT_NEAR(d.at(r, c), oracle::stiffness_entry(2, a.i, a.k, b.i, b.k), 1e-13);
    }
}

TEST(Stiffness, StencilIsLevelIndependent) {
  for (int j = 2; j <= 6; ++j) {
    const auto d = pw::stiffness_matrix(j);
    const int n = pw::interior_per_axis(j);
    const int c = n / 2 + 1;
    const auto row = pw::linear_index({j, c, c});
    EXPECT_EQ(d.at(row, row), 4.0);
    EXPECT_EQ(d.at(row, pw::linear_index({j, c + 1, c})), -1.0);
    EXPECT_EQ(d.at(row, pw::linear_index({j, c, c - 1})), -1.0);
    EXPECT_EQ(d.at(row, pw::linear_index({j, c + 1, c + 1})), 0.0);
    EXPECT_EQ(d.at(row, pw::linear_index({j, c - 1, c - 1})), 0.0);
    EXPECT_EQ(d.row_cols(row).size(), 5u);
  }
}

TEST(Stiffness, SymmetricPositiveDefinite) {
  for (int j = 1; j <= 7; ++j) {
    const auto d = pw::stiffness_matrix(j);
    EXPECT_TRUE(d.is_symmetric());
    EXPECT_NO_THROW(pw::SparseCholesky{d}) << "level " << j;
  }
}

TEST(CrossLevelGram, LemmaValues) {
  const int j = 3, i = 3, k = 4;
  const auto g = pw::cross_level_gram(j);
  const auto row = pw::linear_index({j, i, k});
  const auto at = [&](int fi, int fk) { return g.at(row, pw::linear_index({j + 1, fi, fk})); };
  EXPECT_EQ(at(2 * i, 2 * k), 2.0);
  EXPECT_EQ(at(2 * i - 1, 2 * k + 1), -1.0);
  EXPECT_EQ(at(2 * i - 2, 2 * k - 2), 0.0);
  EXPECT_EQ(at(2 * i + 2, 2 * k + 2), 0.0);
}

TEST(CrossLevelGram, TableAgainstIntegration) {
  for (const auto& e : pw::kCrossLevelStencil)
    EXPECT_NEAR(oracle::cross_gram_entry(2, 2, 2, 4 + e.di, 4 + e.dk), e.value, 1e-13) << e.di << "," << e.dk;
  for (int di = -3; di <= 3; ++di)
    for (int dk = -3; dk <= 3; ++dk) {
      double expected = 0.0;
      for (const auto& e : pw::kCrossLevelStencil)
        if (e.di == di && e.dk == dk) expected = e.value;
      EXPECT_NEAR(oracle::cross_gram_entry(2, 2, 2, 4 + di, 4 + dk), expected, 1e-13) << di << "," << dk;
    }
}

TEST(CrossLevelGram, EqualsRefinementTimesStiffness) {
  for (int j = 1; j <= 5; ++j) {
    const auto g = pw::cross_level_gram(j);
    const auto bd = pw::refinement_matrix(j) * pw::stiffness_matrix(j + 1);
    ASSERT_EQ(g.rows(), bd.rows());
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ASSERT_EQ(g.at(r, c), bd.at(r, c)) << "j=" << j;
    EXPECT_EQ(g.nnz(), bd.nnz());
  }
}

TEST(CrossLevelGram, CoarseStiffnessIsGalerkinProduct) {
  for (int j = 1; j <= 5; ++j) {
    const auto b = pw::refinement_matrix(j);
    const auto bdb = b * pw::stiffness_matrix(j + 1) * b.transposed();
    const auto d = pw::stiffness_matrix(j);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c) ASSERT_EQ(d.at(r, c), bdb.at(r, c)) << "j=" << j;
  }
}
