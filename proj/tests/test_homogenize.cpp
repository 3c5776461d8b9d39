#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "prewavelet/homogenize.hpp"
#include "prewavelet/solver.hpp"

namespace pw = prewavelet;

namespace {

constexpr double kPi = std::numbers::pi;

pw::Trace zero_trace() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

pw::DirichletProblem zero_problem(pw::ScalarField g) {
  return {std::move(g), zero_trace(), zero_trace(), zero_trace(), zero_trace()};
}

/// Five-point -Laplace by central differences.
double minus_laplace_fd(const pw::ScalarField& f, double x, double y, double h = 1e-4) {
  return -(f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
}

/// Traces of a smooth u given as a field, with numerical second derivatives left empty.
pw::DirichletProblem traces_of(const pw::ScalarField& u, pw::ScalarField g) {
  pw::DirichletProblem p;
  p.g = std::move(g);
  p.f1 = {[u](double x) { return u(x, 0.0); }, {}};
  p.f2 = {[u](double x) { return u(x, 1.0); }, {}};
  p.f3 = {[u](double y) { return u(0.0, y); }, {}};
  p.f4 = {[u](double y) { return u(1.0, y); }, {}};
  return p;
}

}  // namespace

TEST(BilinearLift, Examples) {
  const auto h = pw::bilinear_lift({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(h(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(h(0.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(h(1.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(h(1.0, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(h(0.5, 0.5), 2.5);
  const auto zero = pw::bilinear_lift({});
  EXPECT_EQ(zero(0.3, 0.8), 0.0);
}

TEST(Homogenize, ZeroTracesLeaveTheProblemUnchanged) {
  const auto g = [](double x, double y) { return std::exp(x) * y; };
  const auto r = pw::homogenize(zero_problem(g));
  for (double x : {0.1, 0.5, 0.9})
    for (double y : {0.2, 0.7}) {
      EXPECT_EQ(r.g1(x, y), g(x, y));
      EXPECT_EQ(r.lift(x, y), 0.0);
    }
}

TEST(Homogenize, SineTraceOnTheBottomEdge) {
  auto p = zero_problem([](double, double) { return 0.0; });
  p.f1 = {[](double x) { return std::sin(kPi * x); }, [](double x) { return -kPi * kPi * std::sin(kPi * x); }};
  const auto r = pw::homogenize(p);
  for (double x : {0.1, 0.37, 0.5, 0.8})
    for (double y : {0.0, 0.25, 0.6, 1.0}) {
      EXPECT_NEAR(r.lift(x, y), (1.0 - y) * std::sin(kPi * x), 1e-15);
      EXPECT_NEAR(r.g1(x, y), -(1.0 - y) * kPi * kPi * std::sin(kPi * x), 1e-12);
    }
}

TEST(Homogenize, ShiftedRightHandSideIsMinusLaplaceOfTheDifference) {
  // With g = -Laplace(u), the zero-trace part w = u - L must satisfy -Laplace(w) = g1.
  const pw::ScalarField u = [](double x, double y) { return std::exp(x) * std::cos(2.0 * y) + x * x * y; };
  const pw::ScalarField g = [](double x, double y) { return 3.0 * std::exp(x) * std::cos(2.0 * y) - 2.0 * y; };
  auto p = traces_of(u, g);
  p.f1.second_derivative = [](double x) { return std::exp(x); };
  p.f2.second_derivative = [](double x) { return std::exp(x) * std::cos(2.0) + 2.0; };
  p.f3.second_derivative = [](double y) { return -4.0 * std::cos(2.0 * y); };
  p.f4.second_derivative = [](double y) { return -4.0 * std::exp(1.0) * std::cos(2.0 * y); };
  const auto r = pw::homogenize(p);
  const pw::ScalarField w = [&](double x, double y) { return u(x, y) - r.lift(x, y); };
  for (double x : {0.2, 0.5, 0.75})
    for (double y : {0.3, 0.6}) EXPECT_NEAR(r.g1(x, y), minus_laplace_fd(w, x, y), 1e-5) << x << "," << y;
}

TEST(Homogenize, LiftReproducesTheTraces) {
  const pw::ScalarField u = [](double x, double y) { return std::sin(3.0 * x + y) + x * y * y; };
  const auto r = pw::homogenize(traces_of(u, [](double, double) { return 0.0; }));
  for (int s = 0; s <= 20; ++s) {
    const double t = s / 20.0;
    EXPECT_NEAR(r.lift(t, 0.0), u(t, 0.0), 1e-12);
    EXPECT_NEAR(r.lift(t, 1.0), u(t, 1.0), 1e-12);
    EXPECT_NEAR(r.lift(0.0, t), u(0.0, t), 1e-12);
    EXPECT_NEAR(r.lift(1.0, t), u(1.0, t), 1e-12);
  }
}

TEST(Homogenize, CornersFromTraces) {
  const pw::ScalarField u = [](double x, double y) { return 1.0 + 2.0 * x + 3.0 * y + 5.0 * x * y; };
  const auto c = pw::corner_values(traces_of(u, [](double, double) { return 0.0; }));
  EXPECT_DOUBLE_EQ(c.a1, 1.0);
  EXPECT_DOUBLE_EQ(c.a2, 4.0);
  EXPECT_DOUBLE_EQ(c.a3, 11.0);
  EXPECT_DOUBLE_EQ(c.a4, 3.0);
}

TEST(Homogenize, LiftOfQuadraticTracesIsIdempotent) {
  // Lifting the traces of a lift gives the same lift back.
  const pw::ScalarField u = [](double x, double y) { return x * x - 2.0 * y * y + 3.0 * x * y + x - 1.0; };
  const auto first = pw::homogenize(traces_of(u, [](double, double) { return 0.0; }));
  const auto second = pw::homogenize(traces_of(first.lift, [](double, double) { return 0.0; }));
  for (double x : {0.0, 0.15, 0.5, 0.9, 1.0})
    for (double y : {0.0, 0.3, 0.65, 1.0}) EXPECT_NEAR(second.lift(x, y), first.lift(x, y), 1e-13);
}

TEST(Homogenize, FiniteDifferenceFallbackConverges) {
  const pw::ScalarField u = [](double x, double y) { return std::sin(kPi * x) * std::exp(y) + y * y * y; };
  auto exact = traces_of(u, [](double, double) { return 0.0; });
  exact.f1.second_derivative = [](double x) { return -kPi * kPi * std::sin(kPi * x); };
  exact.f2.second_derivative = [](double x) { return -kPi * kPi * std::sin(kPi * x) * std::exp(1.0); };
  exact.f3.second_derivative = [](double y) { return 6.0 * y; };
  exact.f4.second_derivative = [](double y) { return 6.0 * y; };
  const auto reference = pw::homogenize(exact);

  double prev = 0.0;
  for (double step : {1e-2, 5e-3, 2.5e-3}) {
    pw::HomogenizeOptions opt;
    opt.finite_difference = true;
    opt.step = step;
    const auto fd = pw::homogenize(exact, opt);
    double err = 0.0;
    for (double x : {0.2, 0.5, 0.8})
      for (double y : {0.1, 0.5, 0.9}) err = std::max(err, std::abs(fd.g1(x, y) - reference.g1(x, y)));
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.2) << "step " << step;
    }
    prev = err;
  }
  const auto missing = pw::homogenize(traces_of(u, [](double, double) { return 0.0; }));
  EXPECT_NEAR(missing.g1(0.4, 0.6), reference.g1(0.4, 0.6), 1e-4);
}

TEST(Homogenize, RejectsIncompatibleCorners) {
  auto p = zero_problem([](double, double) { return 0.0; });
  p.f1.value = [](double) { return 1.0; };
  EXPECT_THROW(pw::homogenize(p), std::invalid_argument);
  EXPECT_THROW(pw::homogenize(pw::DirichletProblem{}), std::invalid_argument);
  pw::HomogenizeOptions bad;
  bad.step = 0.0;
  EXPECT_THROW(pw::homogenize(zero_problem([](double, double) { return 0.0; }), bad), std::invalid_argument);
}

TEST(Homogenize, HarmonicQuadraticReproducedAtVertices) {
  // u = x^2 - y^2 + xy is harmonic; its lift is not, and the discrete solution
  // w + L must agree with u at every vertex up to the discretisation error.
  const pw::ScalarField u = [](double x, double y) { return x * x - y * y + x * y; };
  const auto r = pw::homogenize(traces_of(u, [](double, double) { return 0.0; }));
  double prev = 1.0;
  for (int level = 2; level <= 5; ++level) {
    const auto w = pw::fem_solve(level, r.g1, pw::QuadratureRule::gauss7()).x;
    const auto full = pw::reconstruct(level, w, r.lift);
    const int side = (1 << level) + 1;
    double err = 0.0;
    for (int k = 0; k < side; ++k)
      for (int i = 0; i < side; ++i) {
        const double x = static_cast<double>(i) / (side - 1), y = static_cast<double>(k) / (side - 1);
        err = std::max(err, std::abs(full[static_cast<std::size_t>(k) * side + i] - u(x, y)));
      }
    EXPECT_LE(err, std::max(prev, 1e-12));
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Reconstruct, BoundaryValuesComeFromTheLift) {
  const int level = 3;
  const pw::Vector w(pw::num_nodes(level), 1.0);
  const auto u = pw::reconstruct(level, w, [](double x, double y) { return x + 10.0 * y; });
  const int side = (1 << level) + 1;
  EXPECT_EQ(u.size(), static_cast<std::size_t>(side * side));
  EXPECT_DOUBLE_EQ(u[side - 1], 1.0);
  EXPECT_DOUBLE_EQ(u[side + 1], 1.0 + 0.125 + 1.25);
  EXPECT_THROW(pw::reconstruct(level, pw::Vector(3), [](double, double) { return 0.0; }), std::invalid_argument);
}
