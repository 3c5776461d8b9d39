#pragma once

// H^1_0-orthogonal complement W_j of V_j inside V_{j+1}.
//
// A prewavelet psi = sum_{i,k} b_{ik} phi^{j+1}_{ik} lies in W_j iff
// G_j b = 0, where G_j = B_j D_{j+1} holds the cross-level inner products.
// Away from the top and right boundary five closed-form families with at most
// four nonzero coefficients span the solution space. The remaining
// 2^{j+3} - 8 functions live on the two fine rows/columns next to the top and
// right edges: all but one of them are found as nullspace vectors of small
// local windows, and the last one is necessarily spread along the whole band.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prewavelet/assembly.hpp"
#include "prewavelet/dense.hpp"
#include "prewavelet/grid.hpp"
#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

enum class WaveletFamily : std::uint8_t {
  kVerticalEdge = 1,    // next to x = 0
  kHorizontalEdge = 2,  // next to y = 0
  kInterior1 = 3,
  kInterior2 = 4,
  kInterior3 = 5,
  kStrip = 6,
  kGlobal = 7,
};

inline std::string_view family_name(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::kVerticalEdge: return "vertical-edge";
    case WaveletFamily::kHorizontalEdge: return "horizontal-edge";
    case WaveletFamily::kInterior1: return "interior-1";
    case WaveletFamily::kInterior2: return "interior-2";
    case WaveletFamily::kInterior3: return "interior-3";
    case WaveletFamily::kStrip: return "strip";
    case WaveletFamily::kGlobal: return "global";
  }
  return "?";
}

using Stencil = std::vector<std::pair<GridIndex, double>>;

/// One prewavelet as fine-level nodal coefficients.
///
/// For the closed-form families (i, k) is the level-j position, with i = 0 for
/// the vertical-edge family and k = 0 for the horizontal-edge family. For strip
/// and global functions it is the fine index of the leading strip coefficient.
struct WaveletSpec {
  WaveletFamily family = WaveletFamily::kStrip;
  int level = 1;
  int i = 0;
  int k = 0;
  Stencil stencil;
};

/// Highest admissible closed-form position, 2^j - 2.
constexpr int closed_form_extent(int level) { return (1 << level) - 2; }

/// Closed-form prewavelet of family 1..5 at level-j position (i, k).
inline WaveletSpec interior_wavelet(int family, int level, int i, int k) {
  check_level(level);
  const int last = closed_form_extent(level);
  const int f = level + 1;
  const auto in_range = [last](int v) { return v >= 1 && v <= last; };
  const auto bad = [&] {
    return std::out_of_range("family " + std::to_string(family) + " position (" + std::to_string(i) +
                             "," + std::to_string(k) + ") not admissible at level " +
                             std::to_string(level));
  };
  WaveletSpec w{static_cast<WaveletFamily>(family), level, i, k, {}};
  switch (family) {
    case 1:
      if (i != 0 || !in_range(k)) throw bad();
      w.stencil = {{{f, 1, 2 * k}, 2.0}, {{f, 1, 2 * k + 1}, 1.0}};
      break;
    case 2:
      if (k != 0 || !in_range(i)) throw bad();
      w.stencil = {{{f, 2 * i, 1}, 2.0}, {{f, 2 * i + 1, 1}, 1.0}};
      break;
    case 3:
      if (!in_range(i) || !in_range(k)) throw bad();
      w.stencil = {{{f, 2 * i, 2 * k}, -1.0},
                   {{f, 2 * i + 1, 2 * k}, 1.0},
                   {{f, 2 * i, 2 * k + 1}, 1.0},
                   {{f, 2 * i + 1, 2 * k + 1}, 1.0}};
      break;
    case 4:
      if (!in_range(i) || !in_range(k)) throw bad();
      w.stencil = {{{f, 2 * i - 1, 2 * k - 1}, 1.0},
                   {{f, 2 * i, 2 * k - 1}, 1.0},
                   {{f, 2 * i - 1, 2 * k}, 1.0},
                   {{f, 2 * i, 2 * k}, -1.0}};
      break;
    case 5:
      if (!in_range(i) || !in_range(k)) throw bad();
      w.stencil = {{{f, 2 * i - 1, 2 * k}, 1.0},
                   {{f, 2 * i, 2 * k + 1}, 1.0},
                   {{f, 2 * i, 2 * k - 1}, -1.0},
                   {{f, 2 * i + 1, 2 * k}, -1.0}};
      break;
    default:
      throw std::out_of_range("closed-form family must be 1..5, got " + std::to_string(family));
  }
  return w;
}

/// Closed-form wavelets in basis order: family 1, family 2, then for every
/// position (i, k) row-major the three interior kinds. Positions are limited
/// to 1..extent (extent <= 2^j - 2).
inline std::vector<WaveletSpec> closed_form_wavelets(int level, int extent) {
  check_level(level);
  extent = std::min(extent, closed_form_extent(level));
  std::vector<WaveletSpec> out;
  if (extent < 1) return out;
  out.reserve(2 * extent + 3 * extent * extent);
  for (int k = 1; k <= extent; ++k) out.push_back(interior_wavelet(1, level, 0, k));
  for (int i = 1; i <= extent; ++i) out.push_back(interior_wavelet(2, level, i, 0));
  for (int k = 1; k <= extent; ++k)
    for (int i = 1; i <= extent; ++i)
      for (int fam = 3; fam <= 5; ++fam) out.push_back(interior_wavelet(fam, level, i, k));
  return out;
}

inline std::vector<WaveletSpec> closed_form_wavelets(int level) {
  return closed_form_wavelets(level, closed_form_extent(level));
}

/// Number of strip wavelets, 2^{j+3} - 8.
constexpr std::size_t strip_count(int level) { return (std::size_t{1} << (level + 3)) - 8; }

namespace detail {

/// Fine nodes on the two rows/columns next to the top and right edges, in
/// path order: along the top from x = 0, through the corner, down the right.
class StripPath {
 public:
  explicit StripPath(int level) : fine_(level + 1), m_(interior_per_axis(level + 1)) {
    position_.assign(num_nodes(fine_), -1);
    int pos = 0;
    const auto add = [&](int i, int k) { position_[linear_index({fine_, i, k})] = pos++; };
    for (int i = 1; i <= m_ - 2; ++i) {
      add(i, m_);
      add(i, m_ - 1);
    }
    add(m_ - 1, m_);
    add(m_ - 1, m_ - 1);
    add(m_, m_);
    add(m_, m_ - 1);
    for (int k = m_ - 2; k >= 1; --k) {
      add(m_, k);
      add(m_ - 1, k);
    }
  }

  /// -1 for nodes off the strip.
  int position(std::size_t fine_ordinal) const { return position_[fine_ordinal]; }

 private:
  int fine_;
  int m_;
  std::vector<int> position_;
};

/// Incremental row echelon form over strip coordinates. Rows are stored
/// reduced, keyed by their leading position.
class StripEchelon {
 public:
  std::size_t rank() const { return rows_.size(); }

  bool try_insert(std::map<int, double> v) {
    double scale = 0.0;
    for (const auto& [p, x] : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return false;
    const double tol = 1e-9 * scale;
    while (!v.empty()) {
      auto first = v.begin();
      if (std::abs(first->second) <= tol) {
        v.erase(first);
        continue;
      }
      const auto hit = rows_.find(first->first);
      if (hit == rows_.end()) {
        rows_.emplace(first->first, std::vector<std::pair<int, double>>(v.begin(), v.end()));
        return true;
      }
      const auto& row = hit->second;
      const double factor = first->second / row.front().second;
      const int lead = first->first;
      v.erase(first);
      for (const auto& [p, x] : row)
        if (p != lead) v[p] -= factor * x;
      for (auto it = v.begin(); it != v.end();) it = std::abs(it->second) <= tol ? v.erase(it) : std::next(it);
    }
    return false;
  }

 private:
  std::map<int, std::vector<std::pair<int, double>>> rows_;
};

/// Nullspace of G restricted to the given fine columns, columns sorted by
/// descending (k, i). Returns stencils over those columns.
inline std::vector<Stencil> window_nullspace(const SparseMatrix& gram_t, std::vector<GridIndex> window) {
  std::sort(window.begin(), window.end(), [](const GridIndex& a, const GridIndex& b) {
    return a.k != b.k ? a.k > b.k : a.i > b.i;
  });
  std::vector<std::size_t> fine_cols;
  fine_cols.reserve(window.size());
  for (const auto& g : window) fine_cols.push_back(linear_index(g));

  std::vector<std::size_t> coarse_rows;
  for (auto c : fine_cols)
    for (auto r : gram_t.row_cols(c)) coarse_rows.push_back(r);
  std::sort(coarse_rows.begin(), coarse_rows.end());
  coarse_rows.erase(std::unique(coarse_rows.begin(), coarse_rows.end()), coarse_rows.end());

  DenseMatrix local(coarse_rows.size(), fine_cols.size());
  for (std::size_t c = 0; c < fine_cols.size(); ++c) {
    const auto rs = gram_t.row_cols(fine_cols[c]);
    const auto vs = gram_t.row_values(fine_cols[c]);
    for (std::size_t p = 0; p < rs.size(); ++p) {
      const auto r = static_cast<std::size_t>(
          std::lower_bound(coarse_rows.begin(), coarse_rows.end(), rs[p]) - coarse_rows.begin());
      local(r, c) = vs[p];
    }
  }
  std::vector<Stencil> out;
  for (const auto& v : rref_nullspace(std::move(local))) {
    Stencil s;
    for (std::size_t c = 0; c < v.size(); ++c)
      if (v[c] != 0.0) s.emplace_back(window[c], v[c]);
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Boundary-strip completion of the closed-form families to a basis of W_j.
///
/// Candidates come from reduced-row-echelon nullspaces of G_j restricted to
/// 3x3 fine windows sliding along the depth-3 band next to the top edge and
/// then down the right edge. A candidate is kept when its strip coefficients
/// extend the rank of those already kept (closed-form wavelets vanish on the
/// strip). Local windows supply 2^{j+3} - 9 functions; the last comes from the
/// nullspace of the whole band and is tagged global.
inline std::vector<WaveletSpec> strip_wavelets(int level) {
  check_level(level);
  const int fine = level + 1;
  const int m = interior_per_axis(fine);
  const std::size_t target = strip_count(level);
  const SparseMatrix gram_t = cross_level_gram(level).transposed();
  const detail::StripPath path(level);
  detail::StripEchelon echelon;
  std::vector<WaveletSpec> out;

  const auto consider = [&](const Stencil& s, WaveletFamily family) {
    std::map<int, double> strip_part;
    for (const auto& [g, v] : s) {
      const int p = path.position(linear_index(g));
      if (p >= 0) strip_part[p] = v;
    }
    if (!echelon.try_insert(std::move(strip_part))) return false;
    // Lead index is the first strip node in path order.
    GridIndex lead = s.front().first;
    int best = -1;
    for (const auto& [g, v] : s) {
      const int p = path.position(linear_index(g));
      if (p >= 0 && (best < 0 || p < best)) {
        best = p;
        lead = g;
      }
    }
    out.push_back({family, level, lead.i, lead.k, s});
    return true;
  };

  const int lo = std::max(1, m - 2);
  std::vector<std::vector<GridIndex>> windows;
  for (int a = 1; a <= std::max(1, m - 2); ++a) {
    std::vector<GridIndex> w;
    for (int k = lo; k <= m; ++k)
      for (int i = a; i <= std::min(a + 2, m); ++i) w.push_back({fine, i, k});
    windows.push_back(std::move(w));
  }
  for (int a = m - 2; a >= 1; --a) {
    std::vector<GridIndex> w;
    for (int k = a; k <= std::min(a + 2, m); ++k)
      for (int i = lo; i <= m; ++i) w.push_back({fine, i, k});
    windows.push_back(std::move(w));
  }
  for (const auto& w : windows) {
    for (const auto& s : detail::window_nullspace(gram_t, w)) {
      if (echelon.rank() + 1 >= target) break;
      consider(s, WaveletFamily::kStrip);
    }
    if (echelon.rank() + 1 >= target) break;
  }

  std::vector<GridIndex> band;
  for (int k = 1; k <= m; ++k)
    for (int i = 1; i <= m; ++i)
      if (i >= lo || k >= lo) band.push_back({fine, i, k});
  bool global_tagged = false;
  for (const auto& s : detail::window_nullspace(gram_t, band)) {
    if (echelon.rank() >= target) break;
    if (consider(s, global_tagged ? WaveletFamily::kStrip : WaveletFamily::kGlobal)) global_tagged = true;
  }
  if (echelon.rank() != target)
    throw std::runtime_error("strip_wavelets: rank deficiency at level " + std::to_string(level) + " (" +
                             std::to_string(echelon.rank()) + " of " + std::to_string(target) + ")");
  return out;
}

/// Complete ordered basis of W_j.
inline std::vector<WaveletSpec> wavelet_basis(int level) {
  auto out = closed_form_wavelets(level);
  auto strip = strip_wavelets(level);
  out.insert(out.end(), std::make_move_iterator(strip.begin()), std::make_move_iterator(strip.end()));
  return out;
}

inline SparseMatrix stencils_to_matrix(const std::vector<WaveletSpec>& specs, int level) {
  SparseRowBuilder b(specs.size(), num_nodes(level + 1));
  std::vector<std::pair<std::size_t, double>> row;
  for (const auto& w : specs) {
    row.clear();
    for (const auto& [g, v] : w.stencil) row.emplace_back(linear_index(g), v);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) b.push(c, v);
    b.end_row();
  }
  return std::move(b).finish();
}

/// C_j, (N_{j+1} - N_j) x N_{j+1}.
inline SparseMatrix wavelet_matrix(int level) { return stencils_to_matrix(wavelet_basis(level), level); }

/// E_j = C_j D_{j+1} C_j^T.
inline SparseMatrix wavelet_gram(const SparseMatrix& wavelets, const SparseMatrix& fine_stiffness) {
  return (wavelets * fine_stiffness) * wavelets.transposed();
}

/// max |B_j D_{j+1} C_j^T|.
inline double verify_orthogonality(const SparseMatrix& refinement, const SparseMatrix& fine_stiffness,
                                   const SparseMatrix& wavelets) {
  return ((refinement * fine_stiffness) * wavelets.transposed()).max_abs();
}

inline double verify_orthogonality(int level) {
  return verify_orthogonality(refinement_matrix(level), stiffness_matrix(level + 1), wavelet_matrix(level));
}

struct DimensionCount {
  std::size_t expected = 0;
  std::size_t actual = 0;
};

/// Dimension of W_j^n (functions of W_j supported on fine indices <= 2n-1):
/// expected 3n^2 - 4n + 1, actual = rank of the closed-form wavelets with
/// positions <= n-1.
inline DimensionCount dimension_check(int level, int n) {
  check_level(level);
  if (n < 1 || n > interior_per_axis(level))
    throw std::out_of_range("dimension_check: n must be in 1..2^j-1");
  const auto nn = static_cast<std::size_t>(n);
  DimensionCount out{3 * nn * nn - 4 * nn + 1, 0};
  const auto specs = closed_form_wavelets(level, n - 1);
  if (specs.empty()) return out;
  const int side = 2 * n - 1;
  DenseMatrix rows(specs.size(), static_cast<std::size_t>(side) * side);
  for (std::size_t r = 0; r < specs.size(); ++r)
    for (const auto& [g, v] : specs[r].stencil) {
      if (g.i > side || g.k > side) throw std::logic_error("closed-form stencil outside V^n");
      rows(r, static_cast<std::size_t>(g.k - 1) * side + (g.i - 1)) = v;
    }
  out.actual = rank(std::move(rows));
  return out;
}

}  // namespace prewavelet
