#include "hjsplit/pdhg_dg.hpp"

#include <fmt/format.h>

#include "detail.hpp"
#include "hjsplit/operators.hpp"

namespace hjsplit {

namespace {

void check_game(const GameProblem& pr, const Vec& tx, const Vec& ty) {
  if (pr.dim_x < 1 || pr.dim_y < 1)
    throw DimensionError(fmt::format("game '{}' needs positive block dimensions", pr.name));
  if (tx.size() != pr.dim_x || ty.size() != pr.dim_y)
    throw DimensionError(fmt::format("point blocks have dimensions ({}, {}), game '{}' expects ({}, {})",
                                     tx.size(), ty.size(), pr.name, pr.dim_x, pr.dim_y));
}

const SeparableConjugates& need_separable(const GameProblem& pr) {
  if (!pr.initial_data.separable)
    throw ConfigError(fmt::format(
        "game '{}' has no separable convex-concave conjugates; the Hopf game solver needs them",
        pr.name));
  return *pr.initial_data.separable;
}

struct Blocks {
  const GameProblem& pr;

  Vec p(const Vec& x, const Vec& y, const Vec& p, const Vec& q, const Vec& anchor, double s,
        double lambda) const {
    return detail::apply_rule(pr.p_update, GamePoint{x, y, p, q}, anchor, s, lambda,
                              [&] { return pr.grad_p(x, y, p, -q, s); });
  }
  Vec q(const Vec& x, const Vec& y, const Vec& p, const Vec& q, const Vec& anchor, double s,
        double lambda) const {
    // d/dq of -H(x, y, p, -q) is +grad_{q_neg} H.
    return detail::apply_rule(pr.q_update, GamePoint{x, y, p, q}, anchor, s, lambda,
                              [&] { return pr.grad_q_neg(x, y, p, -q, s); });
  }
  Vec x(const Vec& x, const Vec& y, const Vec& p, const Vec& q, const Vec& anchor, double s,
        double lambda) const {
    return detail::apply_rule(pr.x_update, GamePoint{x, y, p, q}, anchor, s, lambda,
                              [&]() -> Vec { return -pr.grad_x(x, y, p, -q, s); });
  }
  Vec y(const Vec& x, const Vec& y, const Vec& p, const Vec& q, const Vec& anchor, double s,
        double lambda) const {
    return detail::apply_rule(pr.y_update, GamePoint{x, y, p, q}, anchor, s, lambda,
                              [&] { return pr.grad_y(x, y, p, -q, s); });
  }
};

}  // namespace

void lax_dg_iteration(const GameProblem& pr, const Vec& tx, const Vec& ty, const TimeGrid& grid,
                      const PdhgConfig& cfg, TrajectoryBundle& b) {
  const Blocks blk{pr};
  const int n = grid.n_steps;
  const double sigma = cfg.sigma, tau = cfg.tau, delta = grid.delta;
  const Mat dz = apply_D_lax(b.z);
  const Mat dw = apply_D_lax(b.w);

  Mat p_new = b.p;
  for (int j = 1; j <= n; ++j) {
    const Vec xj = b.x.col(j), yj = b.y.col(j), pj = b.p.col(j), qj = b.q.col(j);
    p_new.col(j) = blk.p(xj, yj, pj, qj, pj + sigma * dz.col(j), grid.node(j), sigma * delta);
  }
  Mat q_new = b.q;
  for (int j = 1; j <= n; ++j) {
    const Vec xj = b.x.col(j), yj = b.y.col(j), pj = p_new.col(j), qj = b.q.col(j);
    q_new.col(j) = blk.q(xj, yj, pj, qj, qj + sigma * dw.col(j), grid.node(j), sigma * delta);
  }
  const bool appendix = cfg.anchor == AnchorVariant::appendix;
  const Mat dtp = apply_Dt_lax(appendix ? p_new : b.p);
  const Mat dtq = apply_Dt_lax(appendix ? q_new : b.q);
  const auto& g = pr.initial_data;

  Mat x_new = b.x;
  {
    const Vec x0 = b.x.col(0), y0 = b.y.col(0);
    const Vec anchor = x0 - tau * dtp.col(0);
    x_new.col(0) = g.prox_x ? g.prox_x(y0, anchor, tau) : Vec(anchor - tau * g.grad_x(x0, y0));
  }
  for (int j = 1; j < n; ++j) {
    const Vec xj = b.x.col(j), yj = b.y.col(j), pj = p_new.col(j), qj = q_new.col(j);
    x_new.col(j) = blk.x(xj, yj, pj, qj, xj - tau * dtp.col(j), grid.node(j), tau * delta);
  }
  x_new.col(n) = tx;

  Mat y_new = b.y;
  {
    const Vec x0 = x_new.col(0), y0 = b.y.col(0);
    const Vec anchor = y0 - tau * dtq.col(0);
    y_new.col(0) = g.prox_y_neg ? g.prox_y_neg(x0, anchor, tau) : Vec(anchor + tau * g.grad_y(x0, y0));
  }
  for (int j = 1; j < n; ++j) {
    const Vec xj = x_new.col(j), yj = b.y.col(j), pj = p_new.col(j), qj = q_new.col(j);
    y_new.col(j) = blk.y(xj, yj, pj, qj, yj - tau * dtq.col(j), grid.node(j), tau * delta);
  }
  y_new.col(n) = ty;

  b.z = x_new + cfg.theta * (x_new - b.x);
  b.w = y_new + cfg.theta * (y_new - b.y);
  b.x = std::move(x_new);
  b.y = std::move(y_new);
  b.p = std::move(p_new);
  b.q = std::move(q_new);
}

void hopf_dg_iteration(const GameProblem& pr, const Vec& tx, const Vec& ty, const TimeGrid& grid,
                       const PdhgConfig& cfg, TrajectoryBundle& b) {
  const SeparableConjugates& sep = need_separable(pr);
  const Blocks blk{pr};
  const int n = grid.n_steps;
  const double sigma = cfg.sigma, tau = cfg.tau, delta = grid.delta;
  const Mat dtz = apply_Dt_hopf(b.z);
  const Mat dtw = apply_Dt_hopf(b.w);

  Mat p_new = b.p;
  for (int j = 1; j <= n; ++j) {
    const int c = j - 1;
    const Vec xj = b.x.col(c), yj = b.y.col(c), pj = b.p.col(c), qj = b.q.col(c);
    Vec v = blk.p(xj, yj, pj, qj, pj + sigma * dtz.col(c), grid.node(j), sigma * delta);
    p_new.col(c) = j == 1 ? sep.prox_e_star(v, sigma) : v;
  }
  Mat q_new = b.q;
  for (int j = 1; j <= n; ++j) {
    const int c = j - 1;
    const Vec xj = b.x.col(c), yj = b.y.col(c), pj = p_new.col(c), qj = b.q.col(c);
    Vec v = blk.q(xj, yj, pj, qj, qj + sigma * dtw.col(c), grid.node(j), sigma * delta);
    q_new.col(c) = j == 1 ? sep.prox_neg_h_lower_star(v, sigma) : v;
  }
  const bool appendix = cfg.anchor == AnchorVariant::appendix;
  const Mat dp = apply_D_hopf(appendix ? p_new : b.p);
  const Mat dq = apply_D_hopf(appendix ? q_new : b.q);

  Mat x_new = b.x;
  for (int j = 1; j < n; ++j) {
    const int c = j - 1;
    const Vec xj = b.x.col(c), yj = b.y.col(c), pj = p_new.col(c), qj = q_new.col(c);
    x_new.col(c) = blk.x(xj, yj, pj, qj, xj - tau * dp.col(c), grid.node(j), tau * delta);
  }
  x_new.col(n - 1) = tx;
  Mat y_new = b.y;
  for (int j = 1; j < n; ++j) {
    const int c = j - 1;
    const Vec xj = x_new.col(c), yj = b.y.col(c), pj = p_new.col(c), qj = q_new.col(c);
    y_new.col(c) = blk.y(xj, yj, pj, qj, yj - tau * dq.col(c), grid.node(j), tau * delta);
  }
  y_new.col(n - 1) = ty;

  b.z = x_new + cfg.theta * (x_new - b.x);
  b.w = y_new + cfg.theta * (y_new - b.y);
  b.x = std::move(x_new);
  b.y = std::move(y_new);
  b.p = std::move(p_new);
  b.q = std::move(q_new);
}

double fval_lax_dg(const GameProblem& pr, const TrajectoryBundle& b, const TimeGrid& grid) {
  detail::check_bundle_shape(b, grid, pr.dim_x, pr.dim_y);
  double f = pr.initial_data.value(b.x.col(0), b.y.col(0));
  for (int j = 1; j <= grid.n_steps; ++j) {
    const Vec xj = b.x.col(j), yj = b.y.col(j), pj = b.p.col(j), qj = b.q.col(j);
    f += pj.dot(xj - b.x.col(j - 1)) - qj.dot(yj - b.y.col(j - 1));
    f -= grid.delta * pr.hamiltonian(xj, yj, pj, -qj, grid.node(j));
  }
  return f;
}

double fval_hopf_dg(const GameProblem& pr, const TrajectoryBundle& b, const TimeGrid& grid,
                    const Vec& tx, const Vec& ty) {
  detail::check_bundle_shape(b, grid, pr.dim_x, pr.dim_y);
  const SeparableConjugates& sep = need_separable(pr);
  const int n = grid.n_steps;
  double f = -sep.e_star(b.p.col(0)) - sep.h_lower_star(-b.q.col(0)) + b.p.col(n - 1).dot(tx) -
             b.q.col(n - 1).dot(ty);
  for (int j = 1; j < n; ++j) {
    f += (b.p.col(j - 1) - b.p.col(j)).dot(b.x.col(j - 1));
    f -= (b.q.col(j - 1) - b.q.col(j)).dot(b.y.col(j - 1));
  }
  for (int j = 1; j <= n; ++j) {
    const int c = j - 1;
    f -= grid.delta * pr.hamiltonian(b.x.col(c), b.y.col(c), b.p.col(c), -b.q.col(c), grid.node(j));
  }
  return f;
}

SolveReport solve_lax_dg(const GameProblem& problem, const Vec& tx, const Vec& ty, double t,
                         const PdhgConfig& cfg) {
  check_game(problem, tx, ty);
  cfg.validate();
  const TimeGrid grid = make_time_grid(t, cfg.delta, Scheme::lax);
  detail::LoopHooks hooks;
  hooks.init = [&](std::uint64_t seed) {
    PdhgConfig c = cfg;
    c.seed = seed;
    return random_init_game(problem.dim_x, problem.dim_y, tx, ty, c, grid);
  };
  hooks.step = [&](const PdhgConfig& c, TrajectoryBundle& b) {
    lax_dg_iteration(problem, tx, ty, grid, c, b);
  };
  hooks.fval = [&](const TrajectoryBundle& b) { return fval_lax_dg(problem, b, grid); };
  return detail::run_pdhg(cfg, grid, hooks);
}

SolveReport solve_hopf_dg(const GameProblem& problem, const Vec& tx, const Vec& ty, double t,
                          const PdhgConfig& cfg) {
  check_game(problem, tx, ty);
  need_separable(problem);
  cfg.validate();
  const TimeGrid grid = make_time_grid(t, cfg.delta, Scheme::hopf);
  detail::LoopHooks hooks;
  hooks.init = [&](std::uint64_t seed) {
    PdhgConfig c = cfg;
    c.seed = seed;
    return random_init_game(problem.dim_x, problem.dim_y, tx, ty, c, grid);
  };
  hooks.step = [&](const PdhgConfig& c, TrajectoryBundle& b) {
    hopf_dg_iteration(problem, tx, ty, grid, c, b);
  };
  hooks.fval = [&](const TrajectoryBundle& b) { return fval_hopf_dg(problem, b, grid, tx, ty); };
  return detail::run_pdhg(cfg, grid, hooks);
}

}  // namespace hjsplit
