#pragma once

// Timing harness: direct FEM on level J versus the cumulative prewavelet
// ladder 1..J, over problems, levels, solvers and CG tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "prewavelet/problems.hpp"
#include "prewavelet/solver.hpp"

namespace prewavelet {

inline constexpr std::string_view kBenchCsvHeader =
    "problem,method,solver,level,tolerance,unknowns,assemble_s,solve_s,total_s,h1_error,l2_error";

struct BenchRecord {
  std::string problem;
  std::string method;
  std::string solver;
  int level = 0;
  std::optional<double> tolerance;  // cg only
  std::size_t unknowns = 0;
  double assemble_s = 0.0;
  double solve_s = 0.0;
  double total_s = 0.0;
  double h1_error = 0.0;
  double l2_error = 0.0;
  bool failed = false;  // errors are written as "error"

  friend bool operator==(const BenchRecord& a, const BenchRecord& b) {
    const bool same_errors = a.failed == b.failed && (a.failed || (a.h1_error == b.h1_error && a.l2_error == b.l2_error));
    return a.problem == b.problem && a.method == b.method && a.solver == b.solver && a.level == b.level &&
           a.tolerance == b.tolerance && a.unknowns == b.unknowns && a.assemble_s == b.assemble_s &&
           a.solve_s == b.solve_s && a.total_s == b.total_s && same_errors;
  }
};

/// Per-run details that do not go into the CSV.
struct BenchRunInfo {
  std::size_t iterations = 0;  // summed over all solves of the run
  double relative_residual = 0.0;
  std::string message;  // set for failed runs
};

struct BenchConfig {
  std::vector<std::string> problems{"sine", "poly", "exp"};
  std::vector<int> levels{4, 5, 6};
  std::vector<Method> methods{Method::kFem, Method::kPrewavelet};
  std::vector<SolverKind> solvers{SolverKind::kDirect};
  std::vector<double> tolerances{1e-10};
  int repetitions = 3;
  int max_level = 7;
  QuadratureRule rule = QuadratureRule::mid3();
  bool parallel = false;  // correctness sweeps only; timings are then meaningless
};

using BenchObserver = std::function<void(const BenchRecord&, const BenchRunInfo&)>;

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TimedRun {
  double assemble_s = 0.0;
  double solve_s = 0.0;
  double total_s = 0.0;
  Vector solution;
  BenchRunInfo info;
};

inline TimedRun run_fem(const Problem& p, int level, const SolveOptions& opt, const QuadratureRule& rule) {
  TimedRun r;
  const auto t0 = Clock::now();
  const SparseMatrix d = stiffness_matrix(level);
  const Vector f = load_vector(level, p.g, rule);
  r.assemble_s = seconds_since(t0);
  const auto t1 = Clock::now();
  auto sol = solve_spd(d, f, opt);
  r.solve_s = seconds_since(t1);
  r.total_s = seconds_since(t0);
  r.info.iterations = sol.report.iterations;
  r.info.relative_residual = sol.report.relative_residual;
  if (!sol.report.converged) r.info.message = "cg did not converge";
  r.solution = std::move(sol.x);
  return r;
}

inline TimedRun run_prewavelet(const Problem& p, int level, const SolveOptions& opt, const QuadratureRule& rule) {
  TimedRun r;
  const auto t0 = Clock::now();
  WaveletHierarchy h;
  const Vector f = load_vector(level, p.g, rule);
  for (int j = 1; j < level; ++j) {
    h.refinement(j);
    h.gram(j);
  }
  r.assemble_s = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto ladder = multilevel_solve(level, f, h, opt);
  r.solution = prolong(ladder, level, h);
  r.solve_s = seconds_since(t1);
  r.total_s = seconds_since(t0);
  for (const auto& rep : ladder.reports) {
    r.info.iterations += rep.iterations;
    r.info.relative_residual = std::max(r.info.relative_residual, rep.relative_residual);
    if (!rep.converged) r.info.message = "cg did not converge";
  }
  return r;
}

inline std::pair<BenchRecord, BenchRunInfo> bench_one(const Problem& p, Method method, SolverKind solver, int level,
                                                      std::optional<double> tol, const BenchConfig& cfg) {
  BenchRecord rec{p.name, std::string(method_name(method)), std::string(solver_name(solver)), level, tol,
                  num_nodes(level), 0.0, 0.0, 0.0, 0.0, 0.0, false};
  SolveOptions opt;
  opt.solver = solver;
  if (tol) opt.cg.tolerance = *tol;
  std::vector<TimedRun> runs;
  try {
    for (int rep = 0; rep <= cfg.repetitions; ++rep) {
      auto run = method == Method::kFem ? run_fem(p, level, opt, cfg.rule) : run_prewavelet(p, level, opt, cfg.rule);
      if (rep > 0 || cfg.repetitions == 0) runs.push_back(std::move(run));
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.h1_error = rec.l2_error = std::numeric_limits<double>::quiet_NaN();
    return {rec, {0, 0.0, e.what()}};
  }
  std::sort(runs.begin(), runs.end(), [](const TimedRun& a, const TimedRun& b) { return a.total_s < b.total_s; });
  TimedRun& med = runs[runs.size() / 2];
  rec.assemble_s = med.assemble_s;
  rec.solve_s = med.solve_s;
  rec.total_s = med.total_s;
  rec.h1_error = h1_error(level, med.solution, p.ux, p.uy);
  rec.l2_error = l2_error(level, med.solution, p.u);
  if (!med.info.message.empty()) rec.failed = true;
  return {rec, med.info};
}

}  // namespace detail

/// One record per (problem, level, method, solver[, tolerance]); each record
/// holds the run with the median total time among `repetitions` runs that
/// follow one discarded warm-up run. Prewavelet times are cumulative over
/// levels 1..J.
inline std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, const BenchObserver& observe = {}) {
  if (cfg.repetitions < 0) throw std::invalid_argument("repetitions must be non-negative");
  for (int level : cfg.levels) {
    check_level(level);
    if (level > cfg.max_level)
      throw std::invalid_argument("level " + std::to_string(level) + " exceeds the configured maximum " +
                                  std::to_string(cfg.max_level));
  }
  for (double t : cfg.tolerances)
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("cg tolerances must lie in (0,1)");

  struct Job {
    Problem problem;
    Method method;
    SolverKind solver;
    int level;
    std::optional<double> tol;
  };
  std::vector<Job> jobs;
  for (const auto& name : cfg.problems) {
    const Problem p = find_problem(name);
    for (int level : cfg.levels)
      for (Method m : cfg.methods)
        for (SolverKind s : cfg.solvers) {
          if (s == SolverKind::kDirect) {
            jobs.push_back({p, m, s, level, std::nullopt});
            continue;
          }
          for (double t : cfg.tolerances) jobs.push_back({p, m, s, level, t});
        }
  }

  std::vector<std::pair<BenchRecord, BenchRunInfo>> results(jobs.size());
  const auto run = [&](std::size_t i) {
    const Job& j = jobs[i];
    return detail::bench_one(j.problem, j.method, j.solver, j.level, j.tol, cfg);
  };
  if (cfg.parallel) {
    std::vector<std::future<std::pair<BenchRecord, BenchRunInfo>>> futures;
    for (std::size_t i = 0; i < jobs.size(); ++i) futures.push_back(std::async(std::launch::async, run, i));
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run(i);
  }

  std::vector<BenchRecord> out;
  out.reserve(results.size());
  for (const auto& [rec, info] : results) {
    if (observe) observe(rec, info);
    out.push_back(rec);
  }
  return out;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << kBenchCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : records) {
    os << r.problem << ',' << r.method << ',' << r.solver << ',' << r.level << ',';
    if (r.tolerance) os << *r.tolerance;
    os << ',' << r.unknowns << ',' << r.assemble_s << ',' << r.solve_s << ',' << r.total_s << ',';
    if (r.failed)
      os << "error,error";
    else
      os << r.h1_error << ',' << r.l2_error;
    os << '\n';
  }
}

inline std::vector<BenchRecord> parse_bench_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kBenchCsvHeader)
    throw std::invalid_argument("bench CSV: missing or unexpected header");
  std::vector<BenchRecord> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 11)
      throw std::invalid_argument("bench CSV line " + std::to_string(line_no) + ": expected 11 fields");
    try {
      BenchRecord r;
      r.problem = f[0];
      r.method = f[1];
      r.solver = f[2];
      r.level = std::stoi(f[3]);
      if (!f[4].empty()) r.tolerance = std::stod(f[4]);
      r.unknowns = std::stoull(f[5]);
      r.assemble_s = std::stod(f[6]);
      r.solve_s = std::stod(f[7]);
      r.total_s = std::stod(f[8]);
      if (f[9] == "error" || f[10] == "error") {
        r.failed = true;
        r.h1_error = r.l2_error = std::numeric_limits<double>::quiet_NaN();
      } else {
        r.h1_error = std::stod(f[9]);
        r.l2_error = std::stod(f[10]);
      }
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bench CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return out;
}

}  // namespace prewavelet
