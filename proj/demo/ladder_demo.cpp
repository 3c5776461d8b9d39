// Refines a sine solution one level at a time by adding prewavelet
// subsolutions, and compares each stage with a direct FEM solve.

#include <cstdio>

#include "prewavelet.hpp"

int main() {
  using namespace prewavelet;
  const Problem p = sine_problem();
  const QuadratureRule rule = QuadratureRule::gauss7().composite(4);
  constexpr int kLevels = 6;

  WaveletHierarchy h;
  MultilevelSolution ladder = start_ladder(1, load_vector(1, p.g, rule));
  std::printf("%5s %9s %12s %12s %14s\n", "level", "unknowns", "h1 error", "l2 error", "ladder - fem");
  for (int level = 1; level <= kLevels; ++level) {
    if (level > 1) extend_ladder(ladder, load_vector(level, p.g, rule), h);
    const Vector u = prolong(ladder, level, h);
    const Vector fem = fem_solve(level, p.g, rule).x;
    double diff = 0.0;
    for (std::size_t m = 0; m < u.size(); ++m) diff = std::max(diff, std::abs(u[m] - fem[m]));
    std::printf("%5d %9zu %12.4e %12.4e %14.3e\n", level, u.size(), h1_error(level, u, p.ux, p.uy),
                l2_error(level, u, p.u), diff);
  }
}
