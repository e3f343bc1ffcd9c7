#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hjsplit/bundle.hpp"
#include "hjsplit/field.hpp"
#include "hjsplit/problem.hpp"
#include "hjsplit/time_grid.hpp"

namespace hjsplit {

struct LaxFriedrichsOptions {
  double a_min = -3.0, a_max = 3.0;
  double b_min = -3.0, b_max = 3.0;
  double mesh = 0.1;
  /// dt = cfl * mesh / (alpha_a + alpha_b); must be in (0, 1).
  double cfl = 0.9;
  std::array<double, 2> alpha{1.0, 1.0};
  /// Extra cells on every side, discarded from the output.
  int ghost_cells = 10;
};

/// Monotone Lax-Friedrichs solve of phi_t + H(z, grad phi, t) = 0 on a 2-D
/// box with phi(., 0) = g. Uses the central-difference Hamiltonian minus
/// alpha-weighted dissipation, forward Euler in time, and linear
/// extrapolation into the outermost ghost layer. Returns one field per
/// requested time (ascending), restricted to the unpadded box.
std::vector<Field2D> lax_friedrichs_2d(
    const std::function<double(const Vec& z, const Vec& grad, double s)>& hamiltonian,
    const std::function<double(const Vec& z)>& initial, const LaxFriedrichsOptions& options,
    const std::vector<double>& times);

/// Classical Lax value for H = c |p|_2 in 2-D: the minimum of g over the
/// closed ball |y - x| <= c t, from a 400 x 400 radial-angular sample
/// followed by golden-section polishing in radius and angle.
double brute_force_lax(const std::function<double(const Vec&)>& g, double speed, const Vec& x,
                       double t);

/// 1-D quadratic test problem: H(x, p) = p^2 / 2 + kappa x^2 / 2,
/// g(x) = a x^2 / 2 + b x + c. Both block updates are exact proxes.
struct QuadraticTestSpec {
  double kappa = 0.0;
  double g_a = 1.0;
  double g_b = 0.0;
  double g_c = 0.0;
};

ControlProblem quadratic_test_problem(const QuadraticTestSpec& spec);

/// Exact discrete saddle of the Lax objective for the quadratic test
/// problem, by a dense solve of the stationarity system. The returned
/// bundle has z = x. Throws ConfigError when the system is singular.
TrajectoryBundle kkt_linear_oracle(const QuadraticTestSpec& spec, const TimeGrid& grid,
                                   double target);

}  // namespace hjsplit
