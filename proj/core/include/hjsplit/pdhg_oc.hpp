#pragma once

#include "hjsplit/bundle.hpp"
#include "hjsplit/config.hpp"
#include "hjsplit/problem.hpp"
#include "hjsplit/time_grid.hpp"

namespace hjsplit {

/// Optimal-control value at (target, t) by primal-dual splitting of the
/// discretized Lax formula with backward Euler dynamics.
///
/// One iteration updates p_1..p_N with the problem's p rule against
/// p_j + sigma (D z)_j, then x_0 with the g step and x_1..x_{N-1} with the
/// x rule against x_j - tau (D^T p)_j, then extrapolates z. The solve stops
/// when both squared updates fall below cfg.tol. Restarts follow
/// cfg.restart_policy. Throws DivergenceError on a non-finite iterate.
SolveReport solve_lax_oc(const ControlProblem& problem, const Vec& target, double t,
                         const PdhgConfig& cfg);

/// Same for the discretized Hopf formula. The p_1 update feeds the result
/// of the H step through prox_{sigma g*}. Throws ConfigError when the
/// initial data has no conjugate.
SolveReport solve_hopf_oc(const ControlProblem& problem, const Vec& target, double t,
                          const PdhgConfig& cfg);

/// g(x_0) + sum_{j=1..N} <p_j, x_j - x_{j-1}> - delta sum_{j=1..N} H(x_j, p_j, s_j)
double fval_lax_oc(const ControlProblem& problem, const TrajectoryBundle& bundle,
                   const TimeGrid& grid);

/// Forward Euler objective on a Lax bundle, with the costate of step
/// [s_j, s_{j+1}] read from slot j + 1:
/// g(x_0) + sum_{j=0..N-1} <p_{j+1}, x_{j+1} - x_j> - delta sum_{j=0..N-1} H(x_j, p_{j+1}, s_j).
double fval_lax_oc_forward(const ControlProblem& problem, const TrajectoryBundle& bundle,
                           const TimeGrid& grid);

/// Mean of the backward and forward Euler objectives.
double fval_lax_oc_averaged(const ControlProblem& problem, const TrajectoryBundle& bundle,
                            const TimeGrid& grid);

/// -g*(p_1) + <p_N, target> + sum_{j<N} <p_j - p_{j+1}, x_j> - delta sum_j H(x_j, p_j, s_j)
double fval_hopf_oc(const ControlProblem& problem, const TrajectoryBundle& bundle,
                    const TimeGrid& grid, const Vec& target);

/// Sup-norm stationarity residuals of the discrete Lagrangian on a Lax bundle.
struct KktResidual {
  /// max_j |x_j - x_{j-1} - delta grad_p H(x_j, p_j, s_j)|
  double r_p = 0.0;
  /// max over interior j of |p_j - p_{j+1} - delta grad_x H(x_j, p_j, s_j)|
  double r_x = 0.0;
  /// |grad g(x_0) - p_1|
  double r_0 = 0.0;
};

KktResidual kkt_residual_oc(const ControlProblem& problem, const TrajectoryBundle& bundle,
                            const TimeGrid& grid);

/// Lax-shaped copy of a Hopf bundle: slot 0 gets x_0 = grad g*(p_1) and p_0 = 0.
/// Throws ConfigError when the problem has no conjugate.
TrajectoryBundle hopf_to_lax_bundle(const ControlProblem& problem, const TrajectoryBundle& bundle);

/// Runs exactly one iteration of the solver update on `bundle` in place
/// (no stopping test, no restart). Exposed for fixed-point checks.
void lax_oc_iteration(const ControlProblem& problem, const Vec& target, const TimeGrid& grid,
                      const PdhgConfig& cfg, TrajectoryBundle& bundle);
void hopf_oc_iteration(const ControlProblem& problem, const Vec& target, const TimeGrid& grid,
                       const PdhgConfig& cfg, TrajectoryBundle& bundle);

}  // namespace hjsplit
