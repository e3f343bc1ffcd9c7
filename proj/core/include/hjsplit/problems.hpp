#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hjsplit/config.hpp"
#include "hjsplit/operators.hpp"
#include "hjsplit/problem.hpp"

namespace hjsplit {

/// c(x) = scale * (base + amplitude * exp(-sharpness * |x - center|^2)).
struct BumpSpeed {
  double base = 1.0;
  double amplitude = 3.0;
  double sharpness = 4.0;
  double scale = 1.0;
  Vec center;

  /// Center (1, 1, 0, ..., 0) in `dim` dimensions.
  static BumpSpeed standard(int dim, double amplitude = 3.0, double scale = 1.0);

  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  double max_value() const { return scale * (base + std::max(amplitude, 0.0)); }
};

/// H(x, p) = c(x) |p|_2 with the ellipse initial data. p-update: shrink2
/// with lambda * c(x); x-update: one gradient step.
ControlProblem eikonal_plus(int dim, double amplitude = 3.0);

/// H(x, p) = -c(x) |p|_2, solved as eikonal_plus with data -g and negated.
ControlProblem eikonal_minus(int dim);

/// H(x, p, s) = c(x - s * drift) |p|_2; `drift` defaults to (-1, 1, 0, ...).
ControlProblem eikonal_time(int dim, Vec drift = Vec());

/// H(x, y, p, q) = c1(x, y) |p|_2 - c2(x, y) |q|_2 with c1 the standard
/// bump on the stacked state and c2(z) = c1(-z).
GameProblem diff_norms(int dim_x, int dim_y);

enum class IsaacsVariant { convex, convex_concave };

/// H(x, y, p, q) = -c(x, y) q + 2|p| - sqrt(p^2 + q^2) - 1 with the
/// scale-2 bump; scalar x and y blocks.
GameProblem isaacs(IsaacsVariant variant);

struct QuadcopterParams {
  double mass = 1.0;
  double gravity = 9.8;
};

/// 12-D quadcopter with state (x1, y1, z1, psi1, theta1, phi1, x2, ..., phi2)
/// and running cost 2 + |controls|^2; data A = diag(0.2, 1, ..., 1).
ControlProblem quadcopter(const QuadcopterParams& params = {});

/// Thrust direction for Euler angles (psi, theta, phi).
Eigen::Vector3d thrust_direction(double psi, double theta, double phi);

using AnyProblem = std::variant<ControlProblem, GameProblem>;

enum class SolverKind { lax_oc, hopf_oc, lax_dg, hopf_dg };

const char* to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);

/// Problem plus its defaults: solver, per-point config and the
/// dissipation pair for the 2-D Lax-Friedrichs reference.
struct RegisteredProblem {
  std::string name;
  AnyProblem problem;
  SolverKind default_solver = SolverKind::lax_oc;
  std::function<PdhgConfig(const Vec& point, double t)> default_config;
  std::array<double, 2> lf_alpha{1.0, 1.0};
};

int stacked_dim(const AnyProblem& problem);

/// H on the stacked state z = (x, y) with gradient (p, q). For games the
/// second block of the gradient is the Hamiltonian's q argument.
std::function<double(const Vec& z, const Vec& grad, double s)> stacked_hamiltonian(
    const AnyProblem& problem);
std::function<double(const Vec& z)> stacked_initial_value(const AnyProblem& problem);

/// Names accepted by make_registered_problem.
std::vector<std::string> registry_names();

/// Builds a registry problem. `dim` applies to the eikonal family only
/// (0 keeps the default of 2). Throws ConfigError for unknown names.
RegisteredProblem make_registered_problem(const std::string& name, int dim = 0);

/// t = 6, delta = 0.05, sigma = 11, tau = 0.24 / sigma.
PdhgConfig quadcopter_trajectory_config();

/// (0.36, -0.62, -0.06, 0.23, 0.85, -0.66, 0.72, -0.45, 0.15, -0.75, 0.04, -0.83)
Vec quadcopter_trajectory_target();

}  // namespace hjsplit
