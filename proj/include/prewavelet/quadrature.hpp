#pragma once

// Quadrature on Type-1 triangles and the load vectors <g, phi> and <g, psi>.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prewavelet/grid.hpp"
#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

using ScalarField = std::function<double(double, double)>;

struct QuadraturePoint {
  std::array<double, 3> barycentric;
  double weight;  // weights sum to 1; scaled by the area at use
};

/// A symmetric rule on the reference triangle, optionally applied on a
/// uniform 4^subdivisions split of each triangle.
struct QuadratureRule {
  std::string name;
  int degree = 0;
  std::vector<QuadraturePoint> points;
  int subdivisions = 0;

  /// Edge-midpoint rule, degree 2.
  static QuadratureRule mid3() {
    constexpr double t = 1.0 / 3.0;
    return {"mid3", 2, {{{0.5, 0.5, 0.0}, t}, {{0.0, 0.5, 0.5}, t}, {{0.5, 0.0, 0.5}, t}}, 0};
  }

  /// Seven-point Radon rule, degree 5.
  static QuadratureRule gauss7() {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
    const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    return {"gauss7",
            5,
            {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
             {{a1, a1, b1}, w1},
             {{a1, b1, a1}, w1},
             {{b1, a1, a1}, w1},
             {{a2, a2, b2}, w2},
             {{a2, b2, a2}, w2},
             {{b2, a2, a2}, w2}},
            0};
  }

  static QuadratureRule by_name(std::string_view name) {
    if (name == "mid3") return mid3();
    if (name == "gauss7") return gauss7();
    throw std::invalid_argument("unknown quadrature rule '" + std::string(name) +
                                "' (expected mid3 or gauss7)");
  }

  QuadratureRule composite(int levels) const {
    QuadratureRule r = *this;
    r.subdivisions = levels;
    return r;
  }
};

/// Straight triangle given by three corners in the plane.
struct PlaneTriangle {
  std::array<double, 3> x;
  std::array<double, 3> y;
  double area() const {
    return 0.5 * std::abs((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]));
  }
};

inline PlaneTriangle to_plane(const Triangle& t) {
  return {{t.vx(0), t.vx(1), t.vx(2)}, {t.vy(0), t.vy(1), t.vy(2)}};
}

namespace detail {

/// Calls visit(barycentric w.r.t. the parent triangle, weight*area) for every
/// quadrature node of the (possibly subdivided) rule.
template <typename Visit>
void for_each_node(const std::array<std::array<double, 3>, 3>& corners, double area,
                   const QuadratureRule& rule, int depth, Visit&& visit) {
  if (depth == 0) {
    for (const auto& q : rule.points) {
      std::array<double, 3> lam{};
      for (int c = 0; c < 3; ++c)
        for (int v = 0; v < 3; ++v) lam[c] += q.barycentric[v] * corners[v][c];
      visit(lam, q.weight * area);
    }
    return;
  }
  std::array<double, 3> m01{}, m12{}, m02{};
  for (int c = 0; c < 3; ++c) {
    m01[c] = 0.5 * (corners[0][c] + corners[1][c]);
    m12[c] = 0.5 * (corners[1][c] + corners[2][c]);
    m02[c] = 0.5 * (corners[0][c] + corners[2][c]);
  }
  const double quarter = 0.25 * area;
  for_each_node({corners[0], m01, m02}, quarter, rule, depth - 1, visit);
  for_each_node({m01, corners[1], m12}, quarter, rule, depth - 1, visit);
  for_each_node({m02, m12, corners[2]}, quarter, rule, depth - 1, visit);
  for_each_node({m01, m12, m02}, quarter, rule, depth - 1, visit);
}

inline constexpr std::array<std::array<double, 3>, 3> kUnitBarycentric{
    {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

}  // namespace detail

/// Calls visit(x, y, barycentric, weight) over all rule nodes of tri.
template <typename Visit>
void for_each_quadrature_node(const PlaneTriangle& tri, const QuadratureRule& rule, Visit&& visit) {
  detail::for_each_node(detail::kUnitBarycentric, tri.area(), rule, rule.subdivisions,
                        [&](const std::array<double, 3>& lam, double w) {
                          const double x = lam[0] * tri.x[0] + lam[1] * tri.x[1] + lam[2] * tri.x[2];
                          const double y = lam[0] * tri.y[0] + lam[1] * tri.y[1] + lam[2] * tri.y[2];
                          visit(x, y, lam, w);
                        });
}

/// Area-weighted quadrature sum of f over tri.
template <typename F>
double integrate(const Triangle& tri, F&& f, const QuadratureRule& rule) {
  double s = 0.0;
  for_each_quadrature_node(to_plane(tri), rule,
                           [&](double x, double y, const auto&, double w) { s += w * f(x, y); });
  return s;
}

/// F_m = <g, phi^j_m> for every interior node, accumulated triangle by triangle
/// in the fixed order of triangles(j).
template <typename G>
Vector load_vector(int level, G&& g, const QuadratureRule& rule = QuadratureRule::mid3()) {
  check_level(level);
  const int n = interior_per_axis(level);
  Vector f(num_nodes(level), 0.0);
  for (const auto& tri : triangles(level)) {
    std::array<double, 3> local{};
    for_each_quadrature_node(to_plane(tri), rule,
                             [&](double x, double y, const std::array<double, 3>& lam, double w) {
                               const double gv = w * g(x, y);
                               for (int v = 0; v < 3; ++v) local[v] += gv * lam[v];
                             });
    for (int v = 0; v < 3; ++v) {
      const auto& vert = tri.vertices[v];
      if (vert.i < 1 || vert.i > n || vert.k < 1 || vert.k > n) continue;
      f[linear_index({level, vert.i, vert.k})] += local[v];
    }
  }
  return f;
}

/// C_j F_{j+1}: wavelet loads from a fine nodal load vector.
inline Vector wavelet_load(const SparseMatrix& wavelets, std::span<const double> fine_load) {
  if (fine_load.size() != wavelets.cols())
    throw std::invalid_argument("wavelet_load: load vector has length " +
                                std::to_string(fine_load.size()) + ", expected " +
                                std::to_string(wavelets.cols()));
  return wavelets.multiply(fine_load);
}

/// Right-hand side sampled at the vertices of a level-L grid (boundary
/// included, row-major in k then i) and interpolated piecewise linearly.
/// Interpolation error is O(4^-L) on smooth data.
class TabulatedField {
 public:
  TabulatedField(int level, std::vector<double> values) : level_(level), values_(std::move(values)) {
    check_level(level);
    const auto side = static_cast<std::size_t>((1 << level) + 1);
    if (values_.size() != side * side)
      throw std::invalid_argument("tabulated field needs " + std::to_string(side * side) +
                                  " values, got " + std::to_string(values_.size()));
  }

  double operator()(double x, double y) const {
    const int cells = 1 << level_;
    const double sx = std::clamp(x, 0.0, 1.0) * cells;
    const double sy = std::clamp(y, 0.0, 1.0) * cells;
    const int ci = std::min(static_cast<int>(sx), cells - 1);
    const int ck = std::min(static_cast<int>(sy), cells - 1);
    const double u = sx - ci, v = sy - ck;
    const auto at = [&](int i, int k) { return values_[static_cast<std::size_t>(k) * (cells + 1) + i]; };
    // Lower triangle (u >= v): (ci,ck),(ci+1,ck),(ci+1,ck+1).
    if (u >= v) return at(ci, ck) + u * (at(ci + 1, ck) - at(ci, ck)) + v * (at(ci + 1, ck + 1) - at(ci + 1, ck));
    return at(ci, ck) + v * (at(ci, ck + 1) - at(ci, ck)) + u * (at(ci + 1, ck + 1) - at(ci, ck + 1));
  }

  int level() const { return level_; }

 private:
  int level_;
  std::vector<double> values_;
};

}  // namespace prewavelet
