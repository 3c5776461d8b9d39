#pragma once

// The two solution paths: direct FEM on one level, and the prewavelet ladder
// u_J = u_1 + w_1 + ... + w_{J-1}, plus error measurement and export.

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prewavelet/assembly.hpp"
#include "prewavelet/dense.hpp"
#include "prewavelet/grid.hpp"
#include "prewavelet/linalg.hpp"
#include "prewavelet/prewavelet_basis.hpp"
#include "prewavelet/quadrature.hpp"
#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

enum class SolverKind { kDirect, kCg };
enum class Method { kFem, kPrewavelet };

inline std::string_view solver_name(SolverKind s) { return s == SolverKind::kDirect ? "direct" : "cg"; }
inline std::string_view method_name(Method m) { return m == Method::kFem ? "fem" : "prewavelet"; }

inline SolverKind parse_solver(std::string_view s) {
  if (s == "direct") return SolverKind::kDirect;
  if (s == "cg") return SolverKind::kCg;
  throw std::invalid_argument("unknown solver '" + std::string(s) + "' (expected direct or cg)");
}

inline Method parse_method(std::string_view s) {
  if (s == "fem") return Method::kFem;
  if (s == "prewavelet") return Method::kPrewavelet;
  throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected fem or prewavelet)");
}

struct SolveOptions {
  SolverKind solver = SolverKind::kDirect;
  CgOptions cg{};
};

inline Solution<Vector> solve_spd(const SparseMatrix& a, std::span<const double> b, const SolveOptions& opt = {}) {
  return opt.solver == SolverKind::kDirect ? cholesky_solve(a, b) : cg_solve(a, b, opt.cg);
}

/// Lazily built per-level operators B_j, D_j, C_j, E_j and the Cholesky
/// factor of E_j. Not thread-safe.
class WaveletHierarchy {
 public:
  const SparseMatrix& refinement(int j) { return get(level(j).refinement, [j] { return refinement_matrix(j); }); }
  const SparseMatrix& stiffness(int j) { return get(level(j).stiffness, [j] { return stiffness_matrix(j); }); }
  const SparseMatrix& wavelets(int j) { return get(level(j).wavelets, [j] { return wavelet_matrix(j); }); }
  const SparseMatrix& gram(int j) {
    return get(level(j).gram, [this, j] { return wavelet_gram(wavelets(j), stiffness(j + 1)); });
  }
  const SparseCholesky& gram_factor(int j) {
    return get(level(j).gram_factor, [this, j] { return SparseCholesky(gram(j)); });
  }

 private:
  struct Level {
    std::optional<SparseMatrix> refinement, stiffness, wavelets, gram;
    std::optional<SparseCholesky> gram_factor;
  };

  Level& level(int j) {
    check_level(j);
    return levels_[j];
  }

  template <typename T, typename Make>
  static const T& get(std::optional<T>& slot, Make&& make) {
    if (!slot) slot.emplace(make());
    return *slot;
  }

  std::map<int, Level> levels_;
};

/// D_j a = F_j.
inline Solution<Vector> fem_solve(int level, std::span<const double> load, const SolveOptions& opt = {}) {
  check_level(level);
  if (load.size() != num_nodes(level)) throw std::invalid_argument("fem_solve: load vector length mismatch");
  return solve_spd(stiffness_matrix(level), load, opt);
}

template <typename G>
Solution<Vector> fem_solve(int level, G&& g, const QuadratureRule& rule, const SolveOptions& opt = {}) {
  return fem_solve(level, load_vector(level, g, rule), opt);
}

/// E_j b = C_j F_{j+1}.
inline Solution<Vector> wavelet_solve(int level, std::span<const double> fine_load, WaveletHierarchy& h,
                                      const SolveOptions& opt = {}) {
  const Vector rhs = wavelet_load(h.wavelets(level), fine_load);
  if (opt.solver == SolverKind::kCg) return cg_solve(h.gram(level), rhs, opt.cg);
  const auto t0 = std::chrono::steady_clock::now();
  Solution<Vector> out{h.gram_factor(level).solve(rhs), {}};
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report.relative_residual = relative_residual(h.gram(level), out.x, rhs);
  return out;
}

/// Coarse coefficients on the base level plus one wavelet coefficient vector
/// per added level; details[t] belongs to W_{base_level + t}.
struct MultilevelSolution {
  int base_level = 1;
  Vector coarse;
  std::vector<Vector> details;
  std::vector<SolverReport> reports;  // coarse solve first, then one per detail level

  int finest_level() const { return base_level + static_cast<int>(details.size()); }
};

/// c_{j+1} = B_j^T c_j + C_j^T b_j, from the base level up to target.
inline Vector prolong(const MultilevelSolution& s, int target_level, WaveletHierarchy& h) {
  if (target_level < s.base_level || target_level > s.finest_level())
    throw std::out_of_range("prolong: target level " + std::to_string(target_level) + " outside " +
                            std::to_string(s.base_level) + ".." + std::to_string(s.finest_level()));
  Vector c = s.coarse;
  for (int j = s.base_level; j < target_level; ++j) {
    Vector next = h.refinement(j).multiply_transposed(c);
    const Vector w = h.wavelets(j).multiply_transposed(s.details[static_cast<std::size_t>(j - s.base_level)]);
    for (std::size_t m = 0; m < next.size(); ++m) next[m] += w[m];
    c = std::move(next);
  }
  return c;
}

/// Starts a ladder: solves D_{j0} a = F_{j0}.
inline MultilevelSolution start_ladder(int base_level, std::span<const double> base_load, const SolveOptions& opt = {}) {
  auto sol = fem_solve(base_level, base_load, opt);
  MultilevelSolution out;
  out.base_level = base_level;
  out.coarse = std::move(sol.x);
  out.reports.push_back(sol.report);
  return out;
}

/// Adds the next level: b_j from E_j b = C_j F_{j+1}, with j the current finest level.
inline void extend_ladder(MultilevelSolution& s, std::span<const double> fine_load, WaveletHierarchy& h,
                          const SolveOptions& opt = {}) {
  auto sol = wavelet_solve(s.finest_level(), fine_load, h, opt);
  s.details.push_back(std::move(sol.x));
  s.reports.push_back(sol.report);
}

/// F_j = B_j F_{j+1} down to the base level; loads[j - base] is level j.
inline std::vector<Vector> restrict_load(int base_level, int level, std::span<const double> load, WaveletHierarchy& h) {
  std::vector<Vector> loads(static_cast<std::size_t>(level - base_level + 1));
  loads.back().assign(load.begin(), load.end());
  for (int j = level - 1; j >= base_level; --j)
    loads[static_cast<std::size_t>(j - base_level)] =
        h.refinement(j).multiply(loads[static_cast<std::size_t>(j - base_level + 1)]);
  return loads;
}

/// Ladder up to level J driven by the finest load F_J; coarser loads are its
/// restrictions, so prolong(J) reproduces fem_solve(J, F_J) up to rounding.
inline MultilevelSolution multilevel_solve(int level, std::span<const double> fine_load, WaveletHierarchy& h,
                                           const SolveOptions& opt = {}, int base_level = 1) {
  check_level(level);
  check_level(base_level);
  if (base_level > level) throw std::invalid_argument("multilevel_solve: base level above target level");
  if (fine_load.size() != num_nodes(level)) throw std::invalid_argument("multilevel_solve: load vector length mismatch");
  const auto loads = restrict_load(base_level, level, fine_load, h);
  auto s = start_ladder(base_level, loads.front(), opt);
  for (int j = base_level; j < level; ++j) extend_ladder(s, loads[static_cast<std::size_t>(j - base_level + 1)], h, opt);
  return s;
}

template <typename G>
MultilevelSolution multilevel_solve(int level, G&& g, const QuadratureRule& rule, WaveletHierarchy& h,
                                    const SolveOptions& opt = {}, int base_level = 1) {
  return multilevel_solve(level, load_vector(level, g, rule), h, opt, base_level);
}

/// Ladder with each level's load integrated on that level, as when levels are
/// added one at a time without knowing the final depth.
template <typename G>
MultilevelSolution incremental_solve(int level, G&& g, const QuadratureRule& rule, WaveletHierarchy& h,
                                     const SolveOptions& opt = {}, int base_level = 1) {
  check_level(level);
  auto s = start_ladder(base_level, load_vector(base_level, g, rule), opt);
  for (int j = base_level; j < level; ++j) extend_ladder(s, load_vector(j + 1, g, rule), h, opt);
  return s;
}

inline DenseMatrix to_dense_matrix(const SparseMatrix& m) { return {m.rows(), m.cols(), m.to_dense()}; }

/// max |B^T (B D B^T)^{-1} B + C^T (C D C^T)^{-1} C - D^{-1}|.
inline double verify_identity(const SparseMatrix& refinement, const SparseMatrix& wavelets,
                              const SparseMatrix& fine_stiffness) {
  const DenseMatrix b = to_dense_matrix(refinement);
  const DenseMatrix c = to_dense_matrix(wavelets);
  const DenseMatrix d = to_dense_matrix(fine_stiffness);
  const DenseMatrix bt = b.transposed(), ct = c.transposed();
  const DenseMatrix sum = bt * inverse(b * d * bt) * b + ct * inverse(c * d * ct) * c;
  return (sum - inverse(d)).max_abs();
}

inline double verify_identity(int level) {
  return verify_identity(refinement_matrix(level), wavelet_matrix(level), stiffness_matrix(level + 1));
}

/// Nodal values on all (2^j+1)^2 vertices, boundary zero, row-major in (k, i).
inline Vector with_boundary(int level, std::span<const double> interior) {
  check_level(level);
  if (interior.size() != num_nodes(level)) throw std::invalid_argument("with_boundary: length mismatch");
  const int cells = 1 << level;
  Vector full(static_cast<std::size_t>(cells + 1) * (cells + 1), 0.0);
  for (int k = 1; k < cells; ++k)
    for (int i = 1; i < cells; ++i)
      full[static_cast<std::size_t>(k) * (cells + 1) + i] = interior[linear_index({level, i, k})];
  return full;
}

namespace detail {

template <typename Visit>
void for_each_element(int level, std::span<const double> full, Visit&& visit) {
  const int cells = 1 << level;
  if (full.size() != static_cast<std::size_t>(cells + 1) * (cells + 1))
    throw std::invalid_argument("nodal vector does not match the level-" + std::to_string(level) + " grid");
  for (const auto& tri : triangles(level)) {
    std::array<double, 3> v{};
    for (int c = 0; c < 3; ++c)
      v[c] = full[static_cast<std::size_t>(tri.vertices[c].k) * (cells + 1) + tri.vertices[c].i];
    const PlaneTriangle p = to_plane(tri);
    const double det = (p.x[1] - p.x[0]) * (p.y[2] - p.y[0]) - (p.x[2] - p.x[0]) * (p.y[1] - p.y[0]);
    const double gx = ((v[1] - v[0]) * (p.y[2] - p.y[0]) - (v[2] - v[0]) * (p.y[1] - p.y[0])) / det;
    const double gy = ((p.x[1] - p.x[0]) * (v[2] - v[0]) - (p.x[2] - p.x[0]) * (v[1] - v[0])) / det;
    visit(p, v, gx, gy);
  }
}

}  // namespace detail

/// |u - u_h|_{H^1} for u_h given by nodal values on the full grid.
inline double h1_error_full(int level, std::span<const double> full, const ScalarField& ux, const ScalarField& uy,
                            const QuadratureRule& rule = QuadratureRule::gauss7()) {
  double s = 0.0;
  detail::for_each_element(level, full, [&](const PlaneTriangle& p, const std::array<double, 3>&, double gx, double gy) {
    for_each_quadrature_node(p, rule, [&](double x, double y, const auto&, double w) {
      const double ex = ux(x, y) - gx, ey = uy(x, y) - gy;
      s += w * (ex * ex + ey * ey);
    });
  });
  return std::sqrt(s);
}

/// ||u - u_h||_{L^2} for u_h given by nodal values on the full grid.
inline double l2_error_full(int level, std::span<const double> full, const ScalarField& u,
                            const QuadratureRule& rule = QuadratureRule::gauss7()) {
  double s = 0.0;
  detail::for_each_element(level, full, [&](const PlaneTriangle& p, const std::array<double, 3>& v, double, double) {
    for_each_quadrature_node(p, rule, [&](double x, double y, const std::array<double, 3>& lam, double w) {
      const double e = u(x, y) - (lam[0] * v[0] + lam[1] * v[1] + lam[2] * v[2]);
      s += w * e * e;
    });
  });
  return std::sqrt(s);
}

/// H^1 seminorm error of interior coefficients (zero trace).
inline double h1_error(int level, std::span<const double> interior, const ScalarField& ux, const ScalarField& uy,
                       const QuadratureRule& rule = QuadratureRule::gauss7()) {
  return h1_error_full(level, with_boundary(level, interior), ux, uy, rule);
}

inline double l2_error(int level, std::span<const double> interior, const ScalarField& u,
                       const QuadratureRule& rule = QuadratureRule::gauss7()) {
  return l2_error_full(level, with_boundary(level, interior), u, rule);
}

/// sqrt(12) 2^-j sqrt(|u_xx|^2 + |u_x u_y|^2 + |u_yy|^2), sup norms.
inline double interpolation_error_bound(int level, double uxx_sup, double uxuy_sup, double uyy_sup) {
  return std::sqrt(12.0) * std::ldexp(1.0, -level) *
         std::sqrt(uxx_sup * uxx_sup + uxuy_sup * uxuy_sup + uyy_sup * uyy_sup);
}

/// CSV with header level,i,k,x,y,value; one row per interior vertex.
inline void write_solution_csv(std::ostream& os, int level, std::span<const double> values) {
  if (values.size() != num_nodes(level)) throw std::invalid_argument("write_solution_csv: length mismatch");
  os << "level,i,k,x,y,value\n" << std::setprecision(17);
  for (std::size_t m = 0; m < values.size(); ++m) {
    const GridIndex g = inverse_index(level, m);
    os << level << ',' << g.i << ',' << g.k << ',' << g.x() << ',' << g.y() << ',' << values[m] << '\n';
  }
}

}  // namespace prewavelet
