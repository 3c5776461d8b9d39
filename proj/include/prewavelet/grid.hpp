#pragma once

// Dyadic Type-1 triangulation of the unit square.
//
// Level j splits [0,1]^2 into 2^j x 2^j cells; every cell is cut by its
// down-left to up-right diagonal. Interior vertices (i/2^j, k/2^j) with
// 1 <= i,k <= 2^j-1 carry the nodal hat functions of V_j.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prewavelet {

inline constexpr int kMaxLevel = 20;

/// Number of interior vertices per axis at level j, 2^j - 1.
constexpr int interior_per_axis(int level) { return (1 << level) - 1; }

/// Dimension of V_j, N_j = (2^j - 1)^2.
constexpr std::size_t num_nodes(int level) {
  const auto n = static_cast<std::size_t>(interior_per_axis(level));
  return n * n;
}

/// Dimension of W_j, N_{j+1} - N_j.
constexpr std::size_t num_wavelets(int level) {
  return num_nodes(level + 1) - num_nodes(level);
}

inline void check_level(int level) {
  if (level < 1 || level > kMaxLevel)
    throw std::out_of_range("level must be in 1.." + std::to_string(kMaxLevel) +
                            ", got " + std::to_string(level));
}

/// Interior vertex (i/2^j, k/2^j) of the level-j grid.
struct GridIndex {
  int level = 1;
  int i = 1;
  int k = 1;

  bool valid() const {
    if (level < 1 || level > kMaxLevel) return false;
    const int n = interior_per_axis(level);
    return i >= 1 && i <= n && k >= 1 && k <= n;
  }
  double x() const { return static_cast<double>(i) / (1 << level); }
  double y() const { return static_cast<double>(k) / (1 << level); }

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// Row-major ordinal: (k-1)(2^j-1) + (i-1).
inline std::size_t linear_index(const GridIndex& g) {
  if (!g.valid())
    throw std::out_of_range("grid index (" + std::to_string(g.level) + "," +
                            std::to_string(g.i) + "," + std::to_string(g.k) +
                            ") out of range");
  const auto n = static_cast<std::size_t>(interior_per_axis(g.level));
  return static_cast<std::size_t>(g.k - 1) * n + static_cast<std::size_t>(g.i - 1);
}

inline GridIndex inverse_index(int level, std::size_t ordinal) {
  check_level(level);
  if (ordinal >= num_nodes(level))
    throw std::out_of_range("ordinal " + std::to_string(ordinal) +
                            " out of range for level " + std::to_string(level));
  const auto n = static_cast<std::size_t>(interior_per_axis(level));
  return {level, static_cast<int>(ordinal % n) + 1, static_cast<int>(ordinal / n) + 1};
}

/// Grid vertex stored as integer numerators over 2^level; boundary allowed.
struct Vertex {
  int i = 0;
  int k = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

enum class Orientation : std::uint8_t { kLower, kUpper };

/// One triangle of the Type-1 triangulation, vertices counter-clockwise.
struct Triangle {
  int level = 1;
  std::array<Vertex, 3> vertices{};
  Orientation orientation = Orientation::kLower;

  double scale() const { return 1.0 / (1 << level); }
  double vx(int v) const { return vertices[v].i * scale(); }
  double vy(int v) const { return vertices[v].k * scale(); }
  /// Exactly 2^{-(2j+1)}.
  double area() const { return 0.5 * scale() * scale(); }
  bool has_vertex(int i, int k) const {
    for (const auto& v : vertices)
      if (v.i == i && v.k == k) return true;
    return false;
  }
};

/// Triangles of cell (ci, ck), ci,ck in 0..2^j-1.
inline Triangle lower_triangle(int level, int ci, int ck) {
  return {level, {{{ci, ck}, {ci + 1, ck}, {ci + 1, ck + 1}}}, Orientation::kLower};
}
inline Triangle upper_triangle(int level, int ci, int ck) {
  return {level, {{{ci, ck}, {ci + 1, ck + 1}, {ci, ck + 1}}}, Orientation::kUpper};
}

/// All 2*4^j triangles, cells row-major, lower before upper.
inline std::vector<Triangle> triangles(int level) {
  check_level(level);
  const int cells = 1 << level;
  std::vector<Triangle> out;
  out.reserve(2 * static_cast<std::size_t>(cells) * cells);
  for (int ck = 0; ck < cells; ++ck)
    for (int ci = 0; ci < cells; ++ci) {
      out.push_back(lower_triangle(level, ci, ck));
      out.push_back(upper_triangle(level, ci, ck));
    }
  return out;
}

/// The six triangles of the hexagonal support of the hat at g.
inline std::vector<Triangle> support_triangles(const GridIndex& g) {
  if (!g.valid()) throw std::out_of_range("support_triangles: invalid grid index");
  const int j = g.level, i = g.i, k = g.k;
  return {
      lower_triangle(j, i, k),         upper_triangle(j, i, k),
      lower_triangle(j, i - 1, k),     upper_triangle(j, i, k - 1),
      lower_triangle(j, i - 1, k - 1), upper_triangle(j, i - 1, k - 1),
  };
}

}  // namespace prewavelet
