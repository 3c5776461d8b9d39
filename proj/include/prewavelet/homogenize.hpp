#pragma once

// Reduction of a Dirichlet problem with nonzero traces to a zero-trace one:
// u = w + L, where L interpolates the traces and -Laplace(w) = g1.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "prewavelet/grid.hpp"
#include "prewavelet/quadrature.hpp"
#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

using EdgeFunction = std::function<double(double)>;

/// A boundary trace and its second derivative. An empty second derivative
/// means "differentiate numerically" (see HomogenizeOptions).
struct Trace {
  EdgeFunction value;
  EdgeFunction second_derivative;
};

/// -Laplace(u) = g on the unit square with
///   u(x,0) = f1(x), u(x,1) = f2(x), u(0,y) = f3(y), u(1,y) = f4(y).
struct DirichletProblem {
  ScalarField g;
  Trace f1, f2, f3, f4;
};

/// a1 = u(0,0), a2 = u(0,1), a3 = u(1,1), a4 = u(1,0).
struct CornerValues {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
};

/// Bilinear function through the four corner values.
inline ScalarField bilinear_lift(const CornerValues& c) {
  return [c](double x, double y) {
    return c.a1 + (c.a4 - c.a1) * x + (c.a2 - c.a1) * y + (c.a3 + c.a1 - c.a4 - c.a2) * x * y;
  };
}

struct HomogenizeOptions {
  bool finite_difference = false;  // ignore supplied second derivatives
  double step = 1e-5;              // central-difference step
  double corner_tolerance = 1e-12;
};

struct Homogenized {
  ScalarField g1;    // right-hand side of the zero-trace problem
  ScalarField lift;  // L with u = w + L
  CornerValues corners;
};

inline double central_second_difference(const EdgeFunction& f, double t, double step) {
  return (f(t + step) - 2.0 * f(t) + f(t - step)) / (step * step);
}

/// Corner values implied by the traces; throws if adjacent traces disagree.
inline CornerValues corner_values(const DirichletProblem& p, double tol = 1e-12) {
  const auto agree = [tol](double a, double b, const char* corner) {
    if (std::abs(a - b) > tol * std::max(1.0, std::max(std::abs(a), std::abs(b))))
      throw std::invalid_argument(std::string("incompatible boundary traces at corner ") + corner + ": " +
                                  std::to_string(a) + " vs " + std::to_string(b));
    return a;
  };
  CornerValues c;
  c.a1 = agree(p.f1.value(0.0), p.f3.value(0.0), "(0,0)");
  c.a2 = agree(p.f2.value(0.0), p.f3.value(1.0), "(0,1)");
  c.a3 = agree(p.f2.value(1.0), p.f4.value(1.0), "(1,1)");
  c.a4 = agree(p.f1.value(1.0), p.f4.value(0.0), "(1,0)");
  return c;
}

inline Homogenized homogenize(const DirichletProblem& p, const HomogenizeOptions& opt = {}) {
  if (!p.g || !p.f1.value || !p.f2.value || !p.f3.value || !p.f4.value)
    throw std::invalid_argument("homogenize: right-hand side and all four traces are required");
  if (!(opt.step > 0.0)) throw std::invalid_argument("homogenize: finite-difference step must be positive");
  Homogenized out;
  out.corners = corner_values(p, opt.corner_tolerance);
  const ScalarField h = bilinear_lift(out.corners);

  const auto second = [&opt](const Trace& t) -> EdgeFunction {
    if (t.second_derivative && !opt.finite_difference) return t.second_derivative;
    return [f = t.value, step = opt.step](double s) { return central_second_difference(f, s, step); };
  };
  const EdgeFunction d1 = second(p.f1), d2 = second(p.f2), d3 = second(p.f3), d4 = second(p.f4);

  out.lift = [h, f1 = p.f1.value, f2 = p.f2.value, f3 = p.f3.value, f4 = p.f4.value](double x, double y) {
    return h(x, y) + x * (f4(y) - h(1.0, y)) + (1.0 - x) * (f3(y) - h(0.0, y)) +
           y * (f2(x) - h(x, 1.0)) + (1.0 - y) * (f1(x) - h(x, 0.0));
  };
  out.g1 = [g = p.g, d1, d2, d3, d4](double x, double y) {
    return g(x, y) + x * d4(y) + (1.0 - x) * d3(y) + y * d2(x) + (1.0 - y) * d1(x);
  };
  return out;
}

/// Values of u = w + L on every vertex of the level grid, boundary included,
/// ordered row-major in (k, i) over 0..2^j. w is given on interior vertices.
inline Vector reconstruct(int level, std::span<const double> w, const ScalarField& lift) {
  check_level(level);
  if (w.size() != num_nodes(level))
    throw std::invalid_argument("reconstruct: expected " + std::to_string(num_nodes(level)) + " interior values");
  const int cells = 1 << level;
  const double hstep = 1.0 / cells;
  Vector u(static_cast<std::size_t>(cells + 1) * (cells + 1));
  for (int k = 0; k <= cells; ++k)
    for (int i = 0; i <= cells; ++i) {
      const bool interior = i > 0 && i < cells && k > 0 && k < cells;
      const double wv = interior ? w[linear_index({level, i, k})] : 0.0;
      u[static_cast<std::size_t>(k) * (cells + 1) + i] = wv + lift(i * hstep, k * hstep);
    }
  return u;
}

}  // namespace prewavelet
