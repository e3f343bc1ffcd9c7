#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hjsplit/csv_io.hpp"
#include "hjsplit/grid_eval.hpp"
#include "hjsplit/pdhg_oc.hpp"
#include "hjsplit/problems.hpp"
#include "hjsplit/reference.hpp"

namespace hjsplit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("{}: '{}' is not a number", what, cell));
    }
  }
  if (out.empty()) throw UsageError(fmt::format("{} is empty", what));
  return out;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto v = parse_list(text, what);
  if (v.size() != 2) throw UsageError(fmt::format("{} needs two values lo,hi", what));
  return {v[0], v[1]};
}

// Per-run settings shared by several subcommands.
struct Common {
  std::string problem;
  int dim = 0;
  std::string solver;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma, tau, delta, tol, theta, value_tol, init_radius, sigma_bump;
  std::optional<int> max_count, max_restarts;
  std::optional<std::string> restart_policy, anchor;
  bool accept_at_cap = false;

  void add(CLI::App* app, bool with_problem = true) {
    if (with_problem) app->add_option("--problem", problem, "Registered problem name")->required();
    app->add_option("--dim", dim, "State dimension (eikonal family only)");
    app->add_option("--solver", solver, "lax | hopf | lax-oc | hopf-oc | lax-dg | hopf-dg");
    app->add_option("--config", config_path, "Flat YAML config file");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--sigma", sigma);
    app->add_option("--tau", tau);
    app->add_option("--delta", delta);
    app->add_option("--tol", tol);
    app->add_option("--theta", theta);
    app->add_option("--value-tol", value_tol);
    app->add_option("--init-radius", init_radius);
    app->add_option("--sigma-bump", sigma_bump);
    app->add_option("--max-count", max_count);
    app->add_option("--max-restarts", max_restarts);
    app->add_option("--restart-policy", restart_policy);
    app->add_option("--anchor", anchor, "appendix | main_text");
    app->add_flag("--accept-at-cap", accept_at_cap);
  }

  ConfigOverrides overrides() const {
    ConfigOverrides file;
    if (!config_path.empty()) file = load_config_file(config_path);
    ConfigOverrides flags;
    flags.sigma = sigma;
    flags.tau = tau;
    flags.delta = delta;
    flags.tol = tol;
    flags.theta = theta;
    flags.value_tol = value_tol;
    flags.init_radius = init_radius;
    flags.sigma_bump = sigma_bump;
    flags.max_count = max_count;
    flags.max_restarts = max_restarts;
    flags.seed = seed;
    if (restart_policy) flags.restart_policy = parse_restart_policy(*restart_policy);
    if (anchor) flags.anchor = parse_anchor_variant(*anchor);
    if (accept_at_cap) flags.accept_at_cap = true;
    // A sigma from the file must not be paired with a tau computed for another sigma.
    ConfigOverrides merged = file.merged_with(flags);
    if (flags.sigma && !flags.tau) merged.tau.reset();
    return merged;
  }

  RegisteredProblem registered() const { return make_registered_problem(problem, dim); }

  SolverKind solver_for(const RegisteredProblem& r) const {
    if (solver.empty()) return r.default_solver;
    const bool game = std::holds_alternative<GameProblem>(r.problem);
    if (solver == "lax") return game ? SolverKind::lax_dg : SolverKind::lax_oc;
    if (solver == "hopf") return game ? SolverKind::hopf_dg : SolverKind::hopf_oc;
    return parse_solver_kind(solver);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::out | std::ios::trunc);
  if (!f) throw UsageError(fmt::format("cannot write '{}'", path));
  return f;
}

int cmd_solve(const Common& c, const std::string& point_text, double time, bool strict,
              std::ostream& out) {
  const RegisteredProblem r = c.registered();
  const Vec point = to_vec(parse_list(point_text, "--point"));
  if (point.size() != stacked_dim(r.problem))
    throw DimensionError(fmt::format("--point has {} coordinates, problem '{}' has dimension {}",
                                     point.size(), r.name, stacked_dim(r.problem)));
  const PdhgConfig cfg = c.overrides().apply(r.default_config(point, time));
  const SolveReport rep = solve_point(r.problem, c.solver_for(r), point, time, cfg);
  out << "fval " << format_double(rep.fval) << '\n'
      << "iterations " << rep.iterations << '\n'
      << "converged " << (rep.converged ? 1 : 0) << '\n'
      << "stop_reason " << to_string(rep.stop_reason) << '\n'
      << "restarts " << rep.restarts << '\n'
      << "sigma " << format_double(rep.sigma) << '\n';
  return strict && !rep.accepted(cfg) ? kExitNotConverged : kExitOk;
}

struct SliceFlags {
  std::string a_range = "-3,3", b_range = "-3,3", axes = "0,1", base;
  double mesh = 0.1;

  void add(CLI::App* app) {
    app->add_option("--a-range", a_range, "lo,hi along the first slice axis");
    app->add_option("--b-range", b_range, "lo,hi along the second slice axis");
    app->add_option("--axes", axes, "Two coordinate indices");
    app->add_option("--base", base, "Base point (default 0)");
    app->add_option("--mesh", mesh);
  }

  SliceGrid slice(int dim) const {
    SliceGrid s;
    s.base = base.empty() ? Vec::Zero(dim) : to_vec(parse_list(base, "--base"));
    const auto ax = parse_list(axes, "--axes");
    if (ax.size() != 2) throw UsageError("--axes needs two indices");
    s.axis_a = static_cast<int>(ax[0]);
    s.axis_b = static_cast<int>(ax[1]);
    std::tie(s.a_min, s.a_max) = parse_range(a_range, "--a-range");
    std::tie(s.b_min, s.b_max) = parse_range(b_range, "--b-range");
    s.mesh = mesh;
    s.validate(dim);
    return s;
  }
};

int cmd_grid(const Common& c, const SliceFlags& sf, const std::string& times_text,
             const std::string& out_path, int threads, std::ostream& out) {
  const RegisteredProblem r = c.registered();
  const SliceGrid slice = sf.slice(stacked_dim(r.problem));
  const auto times = parse_list(times_text, "--times");
  SliceOptions opt;
  opt.overrides = c.overrides();
  opt.base_seed = opt.overrides.seed.value_or(0);
  opt.overrides.seed.reset();
  opt.threads = threads;
  std::ofstream file = open_out(out_path);
  const SliceResult res = eval_slice(r, c.solver_for(r), slice, times, opt);
  write_field_csv(file, res);
  for (std::size_t k = 0; k < times.size(); ++k)
    out << fmt::format("t {} converged_fraction {:.4f} accepted_fraction {:.4f}\n", format_double(times[k]),
                       res.converged_fraction(k), res.accepted_fraction(k));
  out << "failed_nodes " << res.failed_nodes.size() << '\n'
      << "mean_seconds_per_point " << format_double(res.mean_seconds_per_point) << '\n';
  return kExitOk;
}

int cmd_contour(const std::string& in_path, const std::string& out_path, double level,
                std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", in_path));
  const auto fields = read_field_csv(in);
  std::ofstream file = open_out(out_path);
  std::vector<double> times;
  std::vector<std::vector<Segment>> contours;
  for (const auto& f : fields) {
    times.push_back(f.t);
    contours.push_back(extract_zero_level(f, level));
  }
  write_contour_csv(file, times, contours);
  std::size_t total = 0;
  for (const auto& s : contours) total += s.size();
  out << "segments " << total << '\n';
  return kExitOk;
}

int cmd_traj(const Common& c, const std::string& target_text, double time, const std::string& out_path,
             bool strict, std::ostream& out) {
  const RegisteredProblem r = c.registered();
  const auto* oc = std::get_if<ControlProblem>(&r.problem);
  if (!oc) throw UsageError("traj supports optimal-control problems only");
  const Vec target = target_text.empty() && r.name == "quadcopter"
                         ? quadcopter_trajectory_target()
                         : to_vec(parse_list(target_text, "--target"));
  if (target.size() != oc->dim)
    throw DimensionError(fmt::format("--target has {} coordinates, problem has {}", target.size(), oc->dim));
  const PdhgConfig base =
      r.name == "quadcopter" ? quadcopter_trajectory_config() : r.default_config(target, time);
  const PdhgConfig cfg = c.overrides().apply(base);
  const SolverKind kind = c.solver_for(r);
  std::ofstream file = open_out(out_path);
  const SolveReport rep = solve_point(r.problem, kind, target, time, cfg);
  TrajectoryBundle lax = rep.trajectory;
  if (lax.scheme == Scheme::hopf) {
    lax = hopf_to_lax_bundle(*oc, lax);
    // At s = 0 the costate along the characteristic is grad g(x_0) = p_1.
    lax.p.col(0) = lax.p.col(1);
  }
  TimeGrid grid = rep.grid;
  grid.scheme = Scheme::lax;
  write_trajectory_csv(file, lax, grid);
  out << "fval " << format_double(rep.fval) << '\n'
      << "iterations " << rep.iterations << '\n'
      << "converged " << (rep.converged ? 1 : 0) << '\n'
      << "rows " << grid.n_steps + 1 << '\n';
  return strict && !rep.accepted(cfg) ? kExitNotConverged : kExitOk;
}

int cmd_scale(const Common& c, const std::string& dims_text, double time, const std::string& slice_point,
              int repeats, const std::string& out_path, std::ostream& out) {
  std::vector<int> dims;
  for (double d : parse_list(dims_text, "--dims")) {
    if (d < 2 || d != std::floor(d)) throw UsageError("--dims must be integers >= 2");
    dims.push_back(static_cast<int>(d));
  }
  const auto ab = parse_list(slice_point, "--slice-point");
  if (ab.size() != 2) throw UsageError("--slice-point needs two values");
  const std::string name = c.problem;
  auto family = [name](int d) { return make_registered_problem(name, d); };
  auto point_rule = [ab](int d) {
    Vec x = Vec::Zero(d);
    x(0) = ab[0];
    x(1) = ab[1];
    return x;
  };
  std::ofstream file = open_out(out_path);
  const ScalingResult res = scaling_run(family, dims, point_rule, time, c.overrides(), repeats);
  write_scaling_csv(file, res);
  out << "r2_linear " << format_double(res.fit.r2_linear) << '\n'
      << "degenerate " << (res.fit.degenerate ? 1 : 0) << '\n';
  return kExitOk;
}

struct LfFlags {
  double cfl = 0.9;
  int refine = 1;
  std::string diff;
};

int cmd_lf(const Common& c, const SliceFlags& sf, const std::string& times_text, const LfFlags& lf,
           const std::string& out_path, std::ostream& out) {
  const RegisteredProblem r = c.registered();
  if (stacked_dim(r.problem) != 2) throw UsageError("lf needs a two-dimensional problem");
  LaxFriedrichsOptions opt;
  std::vector<Field2D> other;
  std::vector<double> times;
  if (!lf.diff.empty()) {
    std::ifstream in(lf.diff);
    if (!in) throw UsageError(fmt::format("cannot read '{}'", lf.diff));
    other = read_field_csv(in);
    if (other.empty()) throw UsageError("--diff file has no rows");
    const Field2D& f = other.front();
    opt.a_min = f.a_nodes.front();
    opt.a_max = f.a_nodes.back();
    opt.b_min = f.b_nodes.front();
    opt.b_max = f.b_nodes.back();
    const double h = f.a_nodes.size() > 1 ? f.a_nodes[1] - f.a_nodes[0] : sf.mesh;
    opt.mesh = h / lf.refine;
    for (const auto& g : other) times.push_back(g.t);
  } else {
    std::tie(opt.a_min, opt.a_max) = parse_range(sf.a_range, "--a-range");
    std::tie(opt.b_min, opt.b_max) = parse_range(sf.b_range, "--b-range");
    opt.mesh = sf.mesh / lf.refine;
    times = parse_list(times_text, "--times");
  }
  if (lf.refine < 1) throw UsageError("--refine must be >= 1");
  opt.cfl = lf.cfl;
  opt.alpha = r.lf_alpha;
  std::ofstream file = open_out(out_path);
  auto fields = lax_friedrichs_2d(stacked_hamiltonian(r.problem), stacked_initial_value(r.problem), opt, times);
  // Back to the requested mesh.
  for (auto& f : fields) {
    Field2D coarse;
    coarse.t = f.t;
    for (std::size_t i = 0; i < f.a_nodes.size(); i += static_cast<std::size_t>(lf.refine))
      coarse.a_nodes.push_back(f.a_nodes[i]);
    for (std::size_t j = 0; j < f.b_nodes.size(); j += static_cast<std::size_t>(lf.refine))
      coarse.b_nodes.push_back(f.b_nodes[j]);
    coarse.values.resize(static_cast<Eigen::Index>(coarse.a_nodes.size()),
                         static_cast<Eigen::Index>(coarse.b_nodes.size()));
    for (Eigen::Index i = 0; i < coarse.values.rows(); ++i)
      for (Eigen::Index j = 0; j < coarse.values.cols(); ++j)
        coarse.values(i, j) = f.values(i * lf.refine, j * lf.refine);
    f = std::move(coarse);
  }
  write_reference_field_csv(file, fields);
  for (std::size_t k = 0; k < other.size(); ++k) {
    const Field2D& a = other[k];
    const Field2D& b = fields[k];
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
      throw UsageError("--diff field and reference grid differ in shape");
    double max_diff = 0.0;
    for (Eigen::Index i = 0; i < a.values.rows(); ++i)
      for (Eigen::Index j = 0; j < a.values.cols(); ++j)
        if (std::isfinite(a.values(i, j))) max_diff = std::max(max_diff, std::abs(a.values(i, j) - b.values(i, j)));
    const double hd = hausdorff_distance(extract_zero_level(a), extract_zero_level(b));
    out << fmt::format("t {} max_abs_diff {} hausdorff {}\n", format_double(a.t), format_double(max_diff),
                       format_double(hd));
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grid-free Hamilton-Jacobi solver by primal-dual splitting"};
  app.require_subcommand(1);

  Common solve_c, grid_c, traj_c, scale_c, lf_c;
  std::string point, times = "0.1", out_path, in_path, target, dims, slice_point = "-1,0.5";
  double time = 0.0, level = 0.0;
  bool strict = false;
  int threads = 1, repeats = 3;
  SliceFlags grid_sf, lf_sf;
  LfFlags lf;

  auto* solve = app.add_subcommand("solve", "Value at one space-time point");
  solve_c.add(solve);
  solve->add_option("--point", point, "Comma-separated coordinates")->required();
  solve->add_option("--time", time)->required();
  solve->add_flag("--strict", strict, "Exit 2 unless the solve is accepted");

  auto* grid = app.add_subcommand("grid", "Values on a 2-D slice, written as field CSV");
  grid_c.add(grid);
  grid_sf.add(grid);
  grid->add_option("--times", times, "Comma-separated times");
  grid->add_option("--out", out_path)->required();
  grid->add_option("--threads", threads);

  auto* contour = app.add_subcommand("contour", "Zero level sets of a field CSV");
  contour->add_option("--in", in_path)->required();
  contour->add_option("--out", out_path)->required();
  contour->add_option("--level", level);

  auto* traj = app.add_subcommand("traj", "Optimal trajectory and costate at one point");
  traj_c.add(traj);
  traj->add_option("--target", target, "Terminal point (quadcopter has a default)");
  traj->add_option("--time", time)->required();
  traj->add_option("--out", out_path)->required();
  traj->add_flag("--strict", strict);

  auto* scale = app.add_subcommand("scale", "Runtime against dimension");
  scale_c.add(scale);
  scale->add_option("--dims", dims)->required();
  scale->add_option("--time", time)->required();
  scale->add_option("--slice-point", slice_point, "First two coordinates of the probe point");
  scale->add_option("--repeats", repeats);
  scale->add_option("--out", out_path)->required();

  auto* lfc = app.add_subcommand("lf", "Lax-Friedrichs reference field on a 2-D box");
  lf_c.add(lfc);
  lf_sf.add(lfc);
  lfc->add_option("--times", times);
  lfc->add_option("--cfl", lf.cfl);
  lfc->add_option("--refine", lf.refine, "Reference mesh = mesh / refine");
  lfc->add_option("--diff", lf.diff, "PDHG field CSV to compare against");
  lfc->add_option("--out", out_path)->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_c, point, time, strict, out);
    if (*grid) return cmd_grid(grid_c, grid_sf, times, out_path, threads, out);
    if (*contour) return cmd_contour(in_path, out_path, level, out);
    if (*traj) return cmd_traj(traj_c, target, time, out_path, strict, out);
    if (*scale) return cmd_scale(scale_c, dims, time, slice_point, repeats, out_path, out);
    if (*lfc) return cmd_lf(lf_c, lf_sf, times, lf, out_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  }
  return kExitUsage;
}

}  // namespace hjsplit::cli
