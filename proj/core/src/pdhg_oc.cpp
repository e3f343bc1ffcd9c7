#include "hjsplit/pdhg_oc.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "detail.hpp"
#include "hjsplit/operators.hpp"

namespace hjsplit {

namespace {

void check_problem(const ControlProblem& problem, const Vec& target) {
  if (problem.dim < 1) throw DimensionError(fmt::format("problem '{}' has no dimension", problem.name));
  if (target.size() != problem.dim)
    throw DimensionError(fmt::format("point has dimension {}, problem '{}' expects {}", target.size(),
                                     problem.name, problem.dim));
}

const Conjugate& need_conjugate(const ControlProblem& problem) {
  if (!problem.initial_data.conjugate)
    throw ConfigError(
        fmt::format("problem '{}' has no conjugate of its initial data; the Hopf solver needs one",
                    problem.name));
  return *problem.initial_data.conjugate;
}

Vec p_step(const ControlProblem& pr, const Vec& x, const Vec& p, const Vec& anchor, double s,
           double lambda) {
  return detail::apply_rule(pr.p_update, OcPoint{x, p}, anchor, s, lambda,
                            [&] { return pr.grad_p_hamiltonian(x, p, s); });
}

Vec x_step(const ControlProblem& pr, const Vec& x, const Vec& p, const Vec& anchor, double s,
           double lambda) {
  return detail::apply_rule(pr.x_update, OcPoint{x, p}, anchor, s, lambda,
                            [&]() -> Vec { return -pr.grad_x_hamiltonian(x, p, s); });
}

// Negates fval and the costate of a report computed on the reduced problem.
SolveReport negate_report(SolveReport report) {
  report.fval = -report.fval;
  report.trajectory.p = -report.trajectory.p;
  return report;
}

}  // namespace

void lax_oc_iteration(const ControlProblem& pr, const Vec& target, const TimeGrid& grid,
                      const PdhgConfig& cfg, TrajectoryBundle& b) {
  const int n = grid.n_steps;
  const double sigma = cfg.sigma, tau = cfg.tau, delta = grid.delta;
  const Mat dz = apply_D_lax(b.z);
  Mat p_new = b.p;
  for (int j = 1; j <= n; ++j) {
    const Vec xj = b.x.col(j), pj = b.p.col(j);
    const Vec anchor = pj + sigma * dz.col(j);
    p_new.col(j) = p_step(pr, xj, pj, anchor, grid.node(j), sigma * delta);
  }
  const Mat dtp = apply_Dt_lax(cfg.anchor == AnchorVariant::appendix ? p_new : b.p);

  Mat x_new = b.x;
  {
    const Vec x0 = b.x.col(0);
    const Vec anchor = x0 - tau * dtp.col(0);
    const auto& g = pr.initial_data;
    x_new.col(0) = g.prox ? g.prox(anchor, tau) : Vec(anchor - tau * g.grad(x0));
  }
  for (int j = 1; j < n; ++j) {
    const Vec xj = b.x.col(j), pj = p_new.col(j);
    const Vec anchor = xj - tau * dtp.col(j);
    x_new.col(j) = x_step(pr, xj, pj, anchor, grid.node(j), tau * delta);
  }
  x_new.col(n) = target;

  b.z = x_new + cfg.theta * (x_new - b.x);
  b.x = std::move(x_new);
  b.p = std::move(p_new);
}

void hopf_oc_iteration(const ControlProblem& pr, const Vec& target, const TimeGrid& grid,
                       const PdhgConfig& cfg, TrajectoryBundle& b) {
  const Conjugate& conj = need_conjugate(pr);
  const int n = grid.n_steps;
  const double sigma = cfg.sigma, tau = cfg.tau, delta = grid.delta;
  const Mat dtz = apply_Dt_hopf(b.z);
  Mat p_new = b.p;
  for (int j = 1; j <= n; ++j) {
    const int c = j - 1;
    const Vec xj = b.x.col(c), pj = b.p.col(c);
    const Vec anchor = pj + sigma * dtz.col(c);
    Vec v = p_step(pr, xj, pj, anchor, grid.node(j), sigma * delta);
    p_new.col(c) = j == 1 ? conj.prox(v, sigma) : v;
  }
  const Mat dp = apply_D_hopf(cfg.anchor == AnchorVariant::appendix ? p_new : b.p);

  Mat x_new = b.x;
  for (int j = 1; j < n; ++j) {
    const int c = j - 1;
    const Vec xj = b.x.col(c), pj = p_new.col(c);
    const Vec anchor = xj - tau * dp.col(c);
    x_new.col(c) = x_step(pr, xj, pj, anchor, grid.node(j), tau * delta);
  }
  x_new.col(n - 1) = target;

  b.z = x_new + cfg.theta * (x_new - b.x);
  b.x = std::move(x_new);
  b.p = std::move(p_new);
}

double fval_lax_oc(const ControlProblem& pr, const TrajectoryBundle& b, const TimeGrid& grid) {
  detail::check_bundle_shape(b, grid, pr.dim, 0);
  double f = pr.initial_data.value(b.x.col(0));
  for (int j = 1; j <= grid.n_steps; ++j) {
    const Vec xj = b.x.col(j), pj = b.p.col(j);
    f += pj.dot(xj - b.x.col(j - 1));
    f -= grid.delta * pr.hamiltonian(xj, pj, grid.node(j));
  }
  return f;
}

double fval_lax_oc_forward(const ControlProblem& pr, const TrajectoryBundle& b,
                           const TimeGrid& grid) {
  detail::check_bundle_shape(b, grid, pr.dim, 0);
  double f = pr.initial_data.value(b.x.col(0));
  // The costate of the step [s_j, s_{j+1}] sits in slot j + 1 of a Lax bundle.
  for (int j = 0; j < grid.n_steps; ++j) {
    const Vec xj = b.x.col(j), pj = b.p.col(j + 1);
    f += pj.dot(b.x.col(j + 1) - xj);
    f -= grid.delta * pr.hamiltonian(xj, pj, grid.node(j));
  }
  return f;
}

double fval_lax_oc_averaged(const ControlProblem& pr, const TrajectoryBundle& b,
                            const TimeGrid& grid) {
  return 0.5 * (fval_lax_oc(pr, b, grid) + fval_lax_oc_forward(pr, b, grid));
}

double fval_hopf_oc(const ControlProblem& pr, const TrajectoryBundle& b, const TimeGrid& grid,
                    const Vec& target) {
  detail::check_bundle_shape(b, grid, pr.dim, 0);
  if (target.size() != pr.dim) throw DimensionError("target dimension mismatch");
  const Conjugate& conj = need_conjugate(pr);
  const int n = grid.n_steps;
  double f = -conj.value(b.p.col(0)) + b.p.col(n - 1).dot(target);
  for (int j = 1; j < n; ++j) f += (b.p.col(j - 1) - b.p.col(j)).dot(b.x.col(j - 1));
  for (int j = 1; j <= n; ++j) {
    const Vec xj = b.x.col(j - 1), pj = b.p.col(j - 1);
    f -= grid.delta * pr.hamiltonian(xj, pj, grid.node(j));
  }
  return f;
}

KktResidual kkt_residual_oc(const ControlProblem& pr, const TrajectoryBundle& b,
                            const TimeGrid& grid) {
  if (b.scheme != Scheme::lax) throw DimensionError("kkt_residual_oc needs a Lax-shaped bundle");
  detail::check_bundle_shape(b, grid, pr.dim, 0);
  KktResidual r;
  const int n = grid.n_steps;
  for (int j = 1; j <= n; ++j) {
    const Vec xj = b.x.col(j), pj = b.p.col(j);
    const double s = grid.node(j);
    const Vec rp = xj - b.x.col(j - 1) - grid.delta * pr.grad_p_hamiltonian(xj, pj, s);
    r.r_p = std::max(r.r_p, rp.lpNorm<Eigen::Infinity>());
    if (j < n) {
      const Vec rx = pj - b.p.col(j + 1) - grid.delta * pr.grad_x_hamiltonian(xj, pj, s);
      r.r_x = std::max(r.r_x, rx.lpNorm<Eigen::Infinity>());
    }
  }
  r.r_0 = (pr.initial_data.grad(b.x.col(0)) - b.p.col(1)).lpNorm<Eigen::Infinity>();
  return r;
}

TrajectoryBundle hopf_to_lax_bundle(const ControlProblem& pr, const TrajectoryBundle& b) {
  if (b.scheme != Scheme::hopf) throw DimensionError("hopf_to_lax_bundle needs a Hopf bundle");
  const Conjugate& conj = need_conjugate(pr);
  const Eigen::Index n = b.x.cols();
  TrajectoryBundle out;
  out.scheme = Scheme::lax;
  out.x.resize(b.x.rows(), n + 1);
  out.p.resize(b.p.rows(), n + 1);
  out.x.col(0) = conj.grad(b.p.col(0));
  out.p.col(0).setZero();
  out.x.rightCols(n) = b.x;
  out.p.rightCols(n) = b.p;
  out.z = out.x;
  return out;
}

SolveReport solve_lax_oc(const ControlProblem& problem, const Vec& target, double t,
                         const PdhgConfig& cfg) {
  check_problem(problem, target);
  if (problem.reduced) return negate_report(solve_lax_oc(*problem.reduced, target, t, cfg));
  cfg.validate();
  const TimeGrid grid = make_time_grid(t, cfg.delta, Scheme::lax);
  detail::LoopHooks hooks;
  hooks.init = [&](std::uint64_t seed) {
    PdhgConfig c = cfg;
    c.seed = seed;
    return random_init(problem.dim, target, c, grid);
  };
  hooks.step = [&](const PdhgConfig& c, TrajectoryBundle& b) {
    lax_oc_iteration(problem, target, grid, c, b);
  };
  hooks.fval = [&](const TrajectoryBundle& b) { return fval_lax_oc(problem, b, grid); };
  return detail::run_pdhg(cfg, grid, hooks);
}

SolveReport solve_hopf_oc(const ControlProblem& problem, const Vec& target, double t,
                          const PdhgConfig& cfg) {
  check_problem(problem, target);
  if (problem.reduced) return negate_report(solve_hopf_oc(*problem.reduced, target, t, cfg));
  need_conjugate(problem);
  cfg.validate();
  const TimeGrid grid = make_time_grid(t, cfg.delta, Scheme::hopf);
  detail::LoopHooks hooks;
  hooks.init = [&](std::uint64_t seed) {
    PdhgConfig c = cfg;
    c.seed = seed;
    return random_init(problem.dim, target, c, grid);
  };
  hooks.step = [&](const PdhgConfig& c, TrajectoryBundle& b) {
    hopf_oc_iteration(problem, target, grid, c, b);
  };
  hooks.fval = [&](const TrajectoryBundle& b) { return fval_hopf_oc(problem, b, grid, target); };
  return detail::run_pdhg(cfg, grid, hooks);
}

}  // namespace hjsplit
