#pragma once

// Nodal hat-function algebra on Type-1 grids: the refinement matrix B_j,
// the stiffness matrix D_j and the cross-level Gram matrix G_j = B_j D_{j+1}.
// All entries are multiples of 1/2 and therefore exact in binary floating point.

#include <array>
#include <utility>
#include <vector>

#include "prewavelet/grid.hpp"
#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

struct StencilEntry {
  int di;
  int dk;
  double value;
};

/// Two-scale relation: phi^j_{ik} = sum value * phi^{j+1}_{2i+di, 2k+dk}.
inline constexpr std::array<StencilEntry, 7> kRefinementStencil{{
    {0, 0, 1.0},
    {-1, -1, 0.5},
    {0, -1, 0.5},
    {-1, 0, 0.5},
    {1, 0, 0.5},
    {0, 1, 0.5},
    {1, 1, 0.5},
}};

/// Same-level stiffness stencil <phi_{ik}, phi_{i+di,k+dk}>_s. The diagonal
/// neighbours (i+-1, k+-1) contribute 0.
inline constexpr std::array<StencilEntry, 5> kStiffnessStencil{{
    {0, -1, -1.0},
    {-1, 0, -1.0},
    {0, 0, 4.0},
    {1, 0, -1.0},
    {0, 1, -1.0},
}};

/// <phi^j_{ik}, phi^{j+1}_{2i+di, 2k+dk}>_s; every offset not listed is 0,
/// including (-2,-2) and (2,2).
inline constexpr std::array<StencilEntry, 17> kCrossLevelStencil{{
    {-1, -2, -0.5},
    {0, -2, -0.5},
    {-2, -1, -0.5},
    {-1, -1, 1.0},
    {0, -1, 0.5},
    {1, -1, -1.0},
    {-2, 0, -0.5},
    {-1, 0, 0.5},
    {0, 0, 2.0},
    {1, 0, 0.5},
    {2, 0, -0.5},
    {-1, 1, -1.0},
    {0, 1, 0.5},
    {1, 1, 1.0},
    {2, 1, -0.5},
    {0, 2, -0.5},
    {1, 2, -0.5},
}};

namespace detail {

template <std::size_t N>
std::vector<std::pair<GridIndex, double>> apply_stencil(const GridIndex& centre,
                                                        const std::array<StencilEntry, N>& st,
                                                        int target_level, int scale) {
  std::vector<std::pair<GridIndex, double>> out;
  out.reserve(N);
  for (const auto& e : st) {
    if (e.value == 0.0) continue;
    GridIndex f{target_level, scale * centre.i + e.di, scale * centre.k + e.dk};
    if (f.valid()) out.emplace_back(f, e.value);
  }
  return out;
}

template <std::size_t N>
SparseMatrix stencil_matrix(int row_level, int col_level, int scale,
                            const std::array<StencilEntry, N>& st) {
  const std::size_t rows = num_nodes(row_level);
  SparseRowBuilder b(rows, num_nodes(col_level));
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t r = 0; r < rows; ++r) {
    row.clear();
    for (const auto& [g, v] : apply_stencil(inverse_index(row_level, r), st, col_level, scale))
      row.emplace_back(linear_index(g), v);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) b.push(c, v);
    b.end_row();
  }
  return std::move(b).finish();
}

}  // namespace detail

/// Fine-level coefficients of the coarse hat at g; boundary entries dropped.
inline std::vector<std::pair<GridIndex, double>> refinement_row(const GridIndex& g) {
  if (!g.valid()) throw std::out_of_range("refinement_row: invalid grid index");
  return detail::apply_stencil(g, kRefinementStencil, g.level + 1, 2);
}

/// B_j, N_j x N_{j+1}.
inline SparseMatrix refinement_matrix(int level) {
  check_level(level);
  return detail::stencil_matrix(level, level + 1, 2, kRefinementStencil);
}

/// D_j, N_j x N_j.
inline SparseMatrix stiffness_matrix(int level) {
  check_level(level);
  return detail::stencil_matrix(level, level, 1, kStiffnessStencil);
}

/// G_j, N_j x N_{j+1}, entries <phi^j, phi^{j+1}>_s from the closed-form table.
inline SparseMatrix cross_level_gram(int level) {
  check_level(level);
  return detail::stencil_matrix(level, level + 1, 2, kCrossLevelStencil);
}

}  // namespace prewavelet
