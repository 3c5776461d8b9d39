#pragma once

// Built-in zero-trace test problems with exact solutions.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prewavelet/quadrature.hpp"

namespace prewavelet {

struct Problem {
  std::string name;
  std::string description;
  ScalarField u, ux, uy, uxx, uyy;
  ScalarField g;  // -Laplace(u)
};

inline Problem sine_problem() {
  constexpr double tp = 2.0 * std::numbers::pi;
  Problem p{"sine", "u = sin(2 pi x) sin(2 pi y)", {}, {}, {}, {}, {}, {}};
  p.u = [](double x, double y) { return std::sin(tp * x) * std::sin(tp * y); };
  p.ux = [](double x, double y) { return tp * std::cos(tp * x) * std::sin(tp * y); };
  p.uy = [](double x, double y) { return tp * std::sin(tp * x) * std::cos(tp * y); };
  p.uxx = [](double x, double y) { return -tp * tp * std::sin(tp * x) * std::sin(tp * y); };
  p.uyy = p.uxx;
  p.g = [](double x, double y) { return 2.0 * tp * tp * std::sin(tp * x) * std::sin(tp * y); };
  return p;
}

inline Problem poly_problem() {
  Problem p{"poly", "u = x y (1 - x) (1 - y)", {}, {}, {}, {}, {}, {}};
  p.u = [](double x, double y) { return x * y * (1.0 - x) * (1.0 - y); };
  p.ux = [](double x, double y) { return (1.0 - 2.0 * x) * y * (1.0 - y); };
  p.uy = [](double x, double y) { return (1.0 - 2.0 * y) * x * (1.0 - x); };
  p.uxx = [](double, double y) { return -2.0 * y * (1.0 - y); };
  p.uyy = [](double x, double) { return -2.0 * x * (1.0 - x); };
  p.g = [](double x, double y) { return 2.0 * x * (1.0 - x) + 2.0 * y * (1.0 - y); };
  return p;
}

inline Problem exp_problem() {
  Problem p{"exp", "u = x y (1 - x) (1 - y) exp(8 x y)", {}, {}, {}, {}, {}, {}};
  p.u = [](double x, double y) { return (x - x * x) * (y - y * y) * std::exp(8.0 * x * y); };
  p.ux = [](double x, double y) {
    return (y - y * y) * (1.0 - 2.0 * x + 8.0 * y * (x - x * x)) * std::exp(8.0 * x * y);
  };
  p.uy = [](double x, double y) {
    return (x - x * x) * (1.0 - 2.0 * y + 8.0 * x * (y - y * y)) * std::exp(8.0 * x * y);
  };
  p.uxx = [](double x, double y) {
    return (y - y * y) * (-2.0 + 16.0 * y * (1.0 - 2.0 * x) + 64.0 * y * y * (x - x * x)) * std::exp(8.0 * x * y);
  };
  p.uyy = [](double x, double y) {
    return (x - x * x) * (-2.0 + 16.0 * x * (1.0 - 2.0 * y) + 64.0 * x * x * (y - y * y)) * std::exp(8.0 * x * y);
  };
  p.g = [ux = p.uxx, uy = p.uyy](double x, double y) { return -(ux(x, y) + uy(x, y)); };
  return p;
}

inline std::vector<Problem> builtin_problems() { return {sine_problem(), poly_problem(), exp_problem()}; }

inline std::vector<std::string> builtin_problem_names() {
  std::vector<std::string> out;
  for (const auto& p : builtin_problems()) out.push_back(p.name);
  return out;
}

inline Problem find_problem(std::string_view name) {
  for (auto& p : builtin_problems())
    if (p.name == name) return p;
  std::string list;
  for (const auto& n : builtin_problem_names()) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "' (builtins: " + list + ")");
}

/// max |f| over a uniform (samples+1)^2 grid of the unit square.
inline double sampled_sup(const ScalarField& f, int samples = 256) {
  double m = 0.0;
  for (int k = 0; k <= samples; ++k)
    for (int i = 0; i <= samples; ++i)
      m = std::max(m, std::abs(f(static_cast<double>(i) / samples, static_cast<double>(k) / samples)));
  return m;
}

}  // namespace prewavelet
