// prewavelet: solve, verify and bench front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 numerical failure.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prewavelet.hpp"
#include "problem_file.hpp"

namespace pw = prewavelet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kHardMaxLevel = 12;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int max_level_from_env() {
  const char* v = std::getenv("PREWAVELET_MAX_LEVEL");
  if (!v || !*v) return 7;
  try {
    std::size_t used = 0;
    const int m = std::stoi(v, &used);
    if (used != std::string(v).size() || m < 1 || m > kHardMaxLevel) throw std::invalid_argument(v);
    return m;
  } catch (const std::exception&) {
    throw ConfigError("PREWAVELET_MAX_LEVEL must be an integer in 1.." + std::to_string(kHardMaxLevel));
  }
}

void check_level_arg(int level, int max_level, const char* what = "level") {
  if (level < 1 || level > kHardMaxLevel)
    throw ConfigError(std::string(what) + " must be in 1.." + std::to_string(kHardMaxLevel) + ", got " +
                      std::to_string(level));
  if (level > max_level)
    throw ConfigError(std::string(what) + " " + std::to_string(level) + " exceeds PREWAVELET_MAX_LEVEL=" +
                      std::to_string(max_level));
}

void check_tolerance(double t) {
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("tolerance must lie in (0,1)");
}

pw::cli::ProblemSpec resolve_problem(const std::string& selector) {
  const auto names = pw::builtin_problem_names();
  if (std::find(names.begin(), names.end(), selector) != names.end()) return pw::cli::builtin_spec(selector);
  if (std::filesystem::is_regular_file(selector)) return pw::cli::load_problem_file(selector);
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown problem '" + selector + "': not a builtin (" + list + ") and not a readable file");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  int level = 4;
  std::string problem = "sine";
  std::string method = "prewavelet";
  std::string solver = "direct";
  double tol = 1e-10;
  std::string out;
  std::string quad = "mid3";
  int reps = 1;
};

struct SolveRun {
  pw::Vector w;
  double assemble_s = 0.0, solve_s = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

SolveRun solve_once(const SolveArgs& a, const pw::ScalarField& g, const pw::QuadratureRule& rule,
                    const pw::SolveOptions& opt) {
  using Clock = std::chrono::steady_clock;
  const auto since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  SolveRun r;
  const auto t0 = Clock::now();
  if (pw::parse_method(a.method) == pw::Method::kFem) {
    const auto d = pw::stiffness_matrix(a.level);
    const auto f = pw::load_vector(a.level, g, rule);
    r.assemble_s = since(t0);
    const auto t1 = Clock::now();
    auto sol = pw::solve_spd(d, f, opt);
    r.solve_s = since(t1);
    r.iterations = sol.report.iterations;
    r.converged = sol.report.converged;
    r.w = std::move(sol.x);
    return r;
  }
  pw::WaveletHierarchy h;
  const auto f = pw::load_vector(a.level, g, rule);
  for (int j = 1; j < a.level; ++j) {
    h.refinement(j);
    h.gram(j);
  }
  r.assemble_s = since(t0);
  const auto t1 = Clock::now();
  const auto ladder = pw::multilevel_solve(a.level, f, h, opt);
  r.w = pw::prolong(ladder, a.level, h);
  r.solve_s = since(t1);
  for (const auto& rep : ladder.reports) {
    r.iterations += rep.iterations;
    r.converged = r.converged && rep.converged;
  }
  return r;
}

int cmd_solve(const SolveArgs& a, int max_level) {
  check_level_arg(a.level, max_level);
  check_tolerance(a.tol);
  if (a.reps < 1) throw ConfigError("--reps must be at least 1");
  pw::parse_method(a.method);
  pw::SolveOptions opt;
  opt.solver = pw::parse_solver(a.solver);
  opt.cg.tolerance = a.tol;
  const auto rule = pw::QuadratureRule::by_name(a.quad);
  const auto spec = resolve_problem(a.problem);
  const auto hom = pw::homogenize(pw::cli::to_dirichlet(spec));

  std::vector<SolveRun> runs;
  for (int r = 0; r < a.reps; ++r) runs.push_back(solve_once(a, hom.g1, rule, opt));
  std::sort(runs.begin(), runs.end(), [](const SolveRun& x, const SolveRun& y) {
    return x.assemble_s + x.solve_s < y.assemble_s + y.solve_s;
  });
  const SolveRun& run = runs[runs.size() / 2];
  if (!run.converged) throw NumericalError("cg did not reach tolerance " + std::to_string(a.tol));

  pw::Vector u(run.w.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    const auto gi = pw::inverse_index(a.level, m);
    u[m] = run.w[m] + hom.lift(gi.x(), gi.y());
  }

  std::ostringstream summary;
  summary << std::setprecision(6) << "problem=" << spec.name << " level=" << a.level << " unknowns=" << u.size()
          << " method=" << a.method << " solver=" << a.solver << " iterations=" << run.iterations;
  if (spec.builtin) {
    const auto& p = *spec.builtin;
    const auto c = hom.corners;
    const double cxy = c.a3 + c.a1 - c.a4 - c.a2;
    const pw::ScalarField ue = [&](double x, double y) { return p.u(x, y) + pw::bilinear_lift(c)(x, y); };
    const pw::ScalarField ux = [&](double x, double y) { return p.ux(x, y) + (c.a4 - c.a1) + cxy * y; };
    const pw::ScalarField uy = [&](double x, double y) { return p.uy(x, y) + (c.a2 - c.a1) + cxy * x; };
    const auto full = pw::reconstruct(a.level, run.w, hom.lift);
    summary << " h1_error=" << pw::h1_error_full(a.level, full, ux, uy)
            << " l2_error=" << pw::l2_error_full(a.level, full, ue);
  }
  summary << " assemble_s=" << run.assemble_s << " solve_s=" << run.solve_s
          << " total_s=" << run.assemble_s + run.solve_s;

  if (a.out.empty() || a.out == "-") {
    pw::write_solution_csv(std::cout, a.level, u);
    std::cerr << summary.str() << '\n';
  } else {
    auto out = open_output(a.out);
    pw::write_solution_csv(out, a.level, u);
    std::cout << summary.str() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  int level = 3;
  std::string check = "all";
  bool inject_perturbation = false;
  std::string dump_dir;
};

const std::vector<std::string> kChecks{"orthogonality", "rank", "dimensions", "strip", "identity", "equivalence"};

class Reporter {
 public:
  void result(bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
    failed_ = failed_ || !ok;
  }
  void skip(const std::string& name, const std::string& why) { std::cout << "SKIP " << name << ' ' << why << '\n'; }
  bool failed() const { return failed_; }

 private:
  bool failed_ = false;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

int cmd_verify(const VerifyArgs& a, int max_level) {
  check_level_arg(a.level, max_level);
  if (a.level < 2) throw ConfigError("verify needs --level >= 2 (checks run on coarse levels 1..level-1)");
  std::set<std::string> checks;
  std::stringstream ss(a.check);
  for (std::string c; std::getline(ss, c, ',');) {
    if (c == "all") {
      checks.insert(kChecks.begin(), kChecks.end());
    } else if (std::find(kChecks.begin(), kChecks.end(), c) != kChecks.end()) {
      checks.insert(c);
    } else {
      std::string list = "all";
      for (const auto& k : kChecks) list += ", " + k;
      throw ConfigError("unknown check '" + c + "' (expected " + list + ")");
    }
  }
  if (!a.dump_dir.empty() && !std::filesystem::is_directory(a.dump_dir))
    throw ConfigError("dump directory '" + a.dump_dir + "' does not exist");

  Reporter rep;
  const int top = a.level - 1;
  std::map<int, pw::SparseMatrix> wavelets;
  for (int j = 1; j <= top; ++j) {
    auto c = pw::wavelet_matrix(j);
    if (a.inject_perturbation && j == 1) c.row_values_mut(0)[0] += 1.0;
    if (!a.dump_dir.empty()) {
      auto out = open_output((std::filesystem::path(a.dump_dir) / ("C_" + std::to_string(j) + ".txt")).string());
      pw::write_matrix_text(out, c);
    }
    wavelets.emplace(j, std::move(c));
  }

  for (int j = 1; j <= top; ++j) {
    const auto& c = wavelets.at(j);
    const std::string at = "j=" + std::to_string(j);
    if (checks.count("orthogonality")) {
      const double r = pw::verify_orthogonality(pw::refinement_matrix(j), pw::stiffness_matrix(j + 1), c);
      rep.result(r <= 1e-12, "orthogonality", at + " max|B D C^T|=" + fmt(r));
    }
    if (checks.count("rank")) {
      if (j <= 4) {
        const auto r = pw::rank(pw::to_dense_matrix(c));
        rep.result(r == pw::num_wavelets(j), "rank", at + " rank(C)=" + std::to_string(r) + " expected " +
                                                         std::to_string(pw::num_wavelets(j)));
      } else {
        rep.skip("rank", at + " dense rank limited to j<=4");
      }
    }
    if (checks.count("strip")) {
      const auto strip = pw::strip_wavelets(j);
      const auto globals = std::count_if(strip.begin(), strip.end(),
                                         [](const pw::WaveletSpec& w) { return w.family == pw::WaveletFamily::kGlobal; });
      rep.result(strip.size() == pw::strip_count(j) && globals == 1, "strip",
                 at + " count=" + std::to_string(strip.size()) + " expected " + std::to_string(pw::strip_count(j)) +
                     " global=" + std::to_string(globals));
    }
    if (checks.count("identity")) {
      if (j <= 4) {
        const double r = pw::verify_identity(pw::refinement_matrix(j), c, pw::stiffness_matrix(j + 1));
        rep.result(r <= (j <= 3 ? 1e-11 : 1e-10), "identity", at + " residual=" + fmt(r));
      } else {
        rep.skip("identity", at + " dense inverses limited to j<=4");
      }
    }
    if (checks.count("equivalence")) {
      for (const auto& p : pw::builtin_problems()) {
        const auto f = pw::load_vector(j + 1, p.g);
        const auto fem = pw::fem_solve(j + 1, f);
        const auto b = pw::refinement_matrix(j);
        const auto a_coarse = pw::fem_solve(j, b.multiply(f));
        const auto e = pw::wavelet_gram(c, pw::stiffness_matrix(j + 1));
        const auto bw = pw::cholesky_solve(e, pw::wavelet_load(c, f));
        auto prolonged = b.multiply_transposed(a_coarse.x);
        const auto cw = c.multiply_transposed(bw.x);
        double diff = 0.0;
        for (std::size_t m = 0; m < prolonged.size(); ++m) diff = std::max(diff, std::abs(prolonged[m] + cw[m] - fem.x[m]));
        const double rel = diff / std::max(pw::norm_inf(fem.x), 1e-300);
        rep.result(rel <= 1e-9, "equivalence", at + " problem=" + p.name + " rel_inf=" + fmt(rel));
      }
    }
  }
  if (checks.count("dimensions")) {
    std::cout << "dimension table j=" << top << "\n  n  expected  actual\n";
    for (int n = 1; n <= pw::interior_per_axis(top); ++n) {
      const auto d = pw::dimension_check(top, n);
      std::cout << std::setw(3) << n << std::setw(10) << d.expected << std::setw(8) << d.actual << '\n';
      rep.result(d.expected == d.actual, "dimensions", "j=" + std::to_string(top) + " n=" + std::to_string(n));
    }
  }
  return rep.failed() ? kExitVerifyFailed : kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<int> levels{4, 5, 6};
  std::optional<int> level;
  std::vector<std::string> problems{"sine", "poly", "exp"};
  std::string method = "both";
  std::string solver = "direct";
  std::optional<double> tol;
  std::vector<double> tolerances;
  std::string out;
  std::string quad = "mid3";
  int reps = 3;
  bool parallel = false;
};

int cmd_bench(const BenchArgs& a, int max_level) {
  pw::BenchConfig cfg;
  cfg.max_level = max_level;
  cfg.levels = a.level ? std::vector<int>{*a.level} : a.levels;
  for (int l : cfg.levels) check_level_arg(l, max_level);
  cfg.problems = a.problems;
  for (const auto& p : cfg.problems) pw::find_problem(p);
  if (a.method == "both")
    cfg.methods = {pw::Method::kFem, pw::Method::kPrewavelet};
  else
    cfg.methods = {pw::parse_method(a.method)};
  if (a.solver == "both")
    cfg.solvers = {pw::SolverKind::kDirect, pw::SolverKind::kCg};
  else
    cfg.solvers = {pw::parse_solver(a.solver)};
  if (!a.tolerances.empty())
    cfg.tolerances = a.tolerances;
  else if (a.tol)
    cfg.tolerances = {*a.tol};
  for (double t : cfg.tolerances) check_tolerance(t);
  if (a.reps < 1) throw ConfigError("--reps must be at least 1");
  cfg.repetitions = a.reps;
  cfg.rule = pw::QuadratureRule::by_name(a.quad);
  cfg.parallel = a.parallel;

  std::optional<std::ofstream> file;
  if (!a.out.empty() && a.out != "-") file = open_output(a.out);

  bool any_failed = false;
  const auto records = pw::run_benchmark(cfg, [&](const pw::BenchRecord& r, const pw::BenchRunInfo& info) {
    std::cerr << r.problem << ' ' << r.method << ' ' << r.solver << " level=" << r.level;
    if (r.tolerance) std::cerr << " tol=" << *r.tolerance;
    std::cerr << " iterations=" << info.iterations << " total_s=" << r.total_s;
    if (r.failed) std::cerr << " ERROR: " << info.message;
    std::cerr << '\n';
    any_failed = any_failed || r.failed;
  });
  pw::write_bench_csv(file ? static_cast<std::ostream&>(*file) : std::cout, records);

  std::map<std::pair<std::string, int>, std::pair<double, double>> totals;
  for (const auto& r : records) {
    if (r.solver != "direct" || r.failed) continue;
    auto& t = totals[{r.problem, r.level}];
    (r.method == "fem" ? t.first : t.second) = r.total_s;
  }
  for (const auto& [key, t] : totals)
    if (t.first > 0.0 && t.second > 0.0)
      std::cerr << "ratio prewavelet/fem total " << key.first << " level=" << key.second << ": "
                << std::setprecision(3) << t.second / t.first << '\n';
  return any_failed ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prewavelet multiresolution Poisson solver on the unit square"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve one problem and write the nodal solution as CSV");
  solve->add_option("--level", sa.level, "Finest level J (1..12, capped by PREWAVELET_MAX_LEVEL)")->capture_default_str();
  solve->add_option("--problem", sa.problem, "Builtin name (sine, poly, exp) or path to a JSON problem file")
      ->capture_default_str();
  solve->add_option("--method", sa.method, "fem or prewavelet")->capture_default_str();
  solve->add_option("--solver", sa.solver, "direct or cg")->capture_default_str();
  solve->add_option("--tol", sa.tol, "CG relative residual tolerance, in (0,1)")->capture_default_str();
  solve->add_option("--out", sa.out, "Solution CSV path (default: stdout)");
  solve->add_option("--quad", sa.quad, "Load quadrature: mid3 or gauss7")->capture_default_str();
  solve->add_option("--reps", sa.reps, "Repetitions; the median time is reported")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run property checks on coarse levels 1..level-1");
  verify->add_option("--level", va.level, "Finest level; checks cover coarse levels 1..level-1")->capture_default_str();
  verify->add_option("--check", va.check,
                     "Comma list: all, orthogonality, rank, dimensions, strip, identity, equivalence")
      ->capture_default_str();
  verify->add_option("--dump-wavelets", va.dump_dir, "Write each C_j as text to DIR/C_<j>.txt");
  verify->add_flag("--inject-perturbation", va.inject_perturbation, "Test hook: corrupt one entry of C_1")
      ->group("");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time direct FEM against the cumulative prewavelet ladder");
  bench->add_option("--levels", ba.levels, "Comma list of levels")->delimiter(',')->capture_default_str();
  bench->add_option("--level", ba.level, "Single level (overrides --levels)");
  bench->add_option("--problems", ba.problems, "Comma list of builtin problems")->delimiter(',')->capture_default_str();
  bench->add_option("--problem", ba.problems, "Alias of --problems")->delimiter(',');
  bench->add_option("--method", ba.method, "fem, prewavelet or both")->capture_default_str();
  bench->add_option("--solver", ba.solver, "direct, cg or both")->capture_default_str();
  bench->add_option("--tol", ba.tol, "Single CG tolerance (default 1e-10)");
  bench->add_option("--tolerances", ba.tolerances, "Comma list of CG tolerances")->delimiter(',');
  bench->add_option("--out", ba.out, "Bench CSV path (default: stdout)");
  bench->add_option("--quad", ba.quad, "Load quadrature: mid3 or gauss7")->capture_default_str();
  bench->add_option("--reps", ba.reps, "Timed repetitions after one warm-up run")->capture_default_str();
  bench->add_flag("--parallel", ba.parallel, "Run combinations concurrently (timings not meaningful)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const int max_level = max_level_from_env();
    if (*solve) return cmd_solve(sa, max_level);
    if (*verify) return cmd_verify(va, max_level);
    return cmd_bench(ba, max_level);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
