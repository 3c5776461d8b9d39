#pragma once

// Problem files: a small JSON document selecting corner values and a
// right-hand side.
//
//   {"name": "tilted-sine",
//    "corners": [a1, a2, a3, a4],           // u(0,0), u(0,1), u(1,1), u(1,0)
//    "rhs": {"builtin": "sine"}}             // or
//    "rhs": {"tabulated": {"level": L, "values": [...]}}
//
// Traces are the bilinear interpolant of the corners. Tabulated values cover
// all (2^L+1)^2 vertices, row-major in (k, i).

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "prewavelet/homogenize.hpp"
#include "prewavelet/problems.hpp"
#include "prewavelet/quadrature.hpp"

namespace prewavelet::cli {

struct ProblemSpec {
  std::string name;
  CornerValues corners;
  ScalarField g;
  std::optional<Problem> builtin;  // exact zero-trace part when the rhs is builtin
};

inline DirichletProblem to_dirichlet(const ProblemSpec& s) {
  const ScalarField h = bilinear_lift(s.corners);
  const auto zero = [](double) { return 0.0; };
  DirichletProblem p;
  p.g = s.g;
  p.f1 = {[h](double x) { return h(x, 0.0); }, zero};
  p.f2 = {[h](double x) { return h(x, 1.0); }, zero};
  p.f3 = {[h](double y) { return h(0.0, y); }, zero};
  p.f4 = {[h](double y) { return h(1.0, y); }, zero};
  return p;
}

inline ProblemSpec builtin_spec(const std::string& name) {
  ProblemSpec s;
  s.builtin = find_problem(name);
  s.name = s.builtin->name;
  s.g = s.builtin->g;
  return s;
}

inline ProblemSpec parse_problem_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("problem file: top level must be an object");
  ProblemSpec s;
  s.name = j.value("name", std::string("unnamed"));
  if (j.contains("corners")) {
    const auto& c = j.at("corners");
    if (!c.is_array() || c.size() != 4) throw std::invalid_argument("problem file: corners must hold 4 numbers");
    s.corners = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<double>()};
  }
  if (!j.contains("rhs")) throw std::invalid_argument("problem file: missing rhs");
  const auto& rhs = j.at("rhs");
  if (rhs.contains("builtin")) {
    s.builtin = find_problem(rhs.at("builtin").get<std::string>());
    s.g = s.builtin->g;
  } else if (rhs.contains("tabulated")) {
    const auto& t = rhs.at("tabulated");
    s.g = TabulatedField(t.at("level").get<int>(), t.at("values").get<std::vector<double>>());
  } else {
    throw std::invalid_argument("problem file: rhs needs 'builtin' or 'tabulated'");
  }
  return s;
}

inline ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file '" + path + "'");
  try {
    return parse_problem_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("problem file '" + path + "': " + e.what());
  }
}

}  // namespace prewavelet::cli
