#pragma once

#include "hjsplit/bundle.hpp"
#include "hjsplit/config.hpp"
#include "hjsplit/problem.hpp"
#include "hjsplit/time_grid.hpp"

namespace hjsplit {

/// Two-player zero-sum game value at (target_x, target_y, t) from the
/// discretized Lax-type min-max formula.
///
/// Block order per iteration: p (anchor p + sigma D z), q (anchor
/// q + sigma D w), x (x_0 through g, interior through the x rule, anchor
/// x - tau D^T p), y (y_0 through -g, interior through the y rule, anchor
/// y - tau D^T q), then joint extrapolation of (x, y). Stops when all four
/// squared updates are below cfg.tol.
SolveReport solve_lax_dg(const GameProblem& problem, const Vec& target_x, const Vec& target_y,
                         double t, const PdhgConfig& cfg);

/// Hopf-type variant for separable convex-concave data g = e(x) + h(y).
/// Throws ConfigError when the data has no separable conjugates.
SolveReport solve_hopf_dg(const GameProblem& problem, const Vec& target_x, const Vec& target_y,
                          double t, const PdhgConfig& cfg);

/// g(x_0, y_0) + sum_j <p_j, x_j - x_{j-1}> - <q_j, y_j - y_{j-1}> - delta sum_j H(x_j, y_j, p_j, -q_j, s_j)
double fval_lax_dg(const GameProblem& problem, const TrajectoryBundle& bundle,
                   const TimeGrid& grid);

/// -e*(p_1) - h_*(-q_1) + <p_N, x> - <q_N, y>
///   + sum_{j<N} <p_j - p_{j+1}, x_j> - <q_j - q_{j+1}, y_j> - delta sum_j H
double fval_hopf_dg(const GameProblem& problem, const TrajectoryBundle& bundle,
                    const TimeGrid& grid, const Vec& target_x, const Vec& target_y);

void lax_dg_iteration(const GameProblem& problem, const Vec& target_x, const Vec& target_y,
                      const TimeGrid& grid, const PdhgConfig& cfg, TrajectoryBundle& bundle);
void hopf_dg_iteration(const GameProblem& problem, const Vec& target_x, const Vec& target_y,
                       const TimeGrid& grid, const PdhgConfig& cfg, TrajectoryBundle& bundle);

}  // namespace hjsplit
