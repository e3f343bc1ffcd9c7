#include "hjsplit/problems.hpp"

#include <cmath>
#include <memory>

#include <fmt/format.h>

namespace hjsplit {

namespace {

// Gradient of |p|_2, taken as 0 at p = 0.
Vec unit_or_zero(const Vec& p) {
  const double n = p.norm();
  return n > 0.0 ? Vec(p / n) : Vec::Zero(p.size());
}

OcRule shrink2_rule(std::function<double(const Vec& x, double s)> speed) {
  OcRule rule;
  rule.kind = OcRule::Kind::closed_form_prox;
  rule.prox = [speed](const OcPoint& at, const Vec& anchor, double s, double lambda) {
    return shrink2(anchor, lambda * speed(at.x, s));
  };
  return rule;
}

OcRule gradient_rule() { return OcRule{}; }

// g(z) = offset + 1/2 sum w_i z_i^2 on the stacked state, w = 1/a.
GameInitialData stacked_quadratic_data(const DiagQuadratic& g, int dim_x) {
  GameInitialData d;
  const int dim_y = g.dim() - dim_x;
  const Vec wx = g.diag.head(dim_x).cwiseInverse();
  const Vec wy = g.diag.tail(dim_y).cwiseInverse();
  d.value = [g](const Vec& x, const Vec& y) {
    Vec z(x.size() + y.size());
    z << x, y;
    return g.value(z);
  };
  d.grad_x = [wx](const Vec& x, const Vec&) -> Vec { return wx.cwiseProduct(x); };
  d.grad_y = [wy](const Vec&, const Vec& y) -> Vec { return wy.cwiseProduct(y); };
  d.prox_x = [wx](const Vec&, const Vec& v, double lambda) -> Vec {
    return (v.array() / (1.0 + lambda * wx.array())).matrix();
  };
  d.prox_y_neg = [wy](const Vec&, const Vec& v, double lambda) -> Vec {
    const Eigen::ArrayXd denom = 1.0 - lambda * wy.array();
    if ((denom <= 1e-12).any())
      throw ConfigError("tau too large for the concave prox of the initial data in y");
    return (v.array() / denom).matrix();
  };
  return d;
}

Vec stack(const Vec& a, const Vec& b) {
  Vec z(a.size() + b.size());
  z << a, b;
  return z;
}

}  // namespace

BumpSpeed BumpSpeed::standard(int dim, double amplitude, double scale) {
  if (dim < 1) throw DimensionError("bump speed needs dim >= 1");
  BumpSpeed c;
  c.amplitude = amplitude;
  c.scale = scale;
  c.center = Vec::Zero(dim);
  c.center(0) = 1.0;
  if (dim > 1) c.center(1) = 1.0;
  return c;
}

double BumpSpeed::value(const Vec& x) const {
  return scale * (base + amplitude * std::exp(-sharpness * (x - center).squaredNorm()));
}

Vec BumpSpeed::grad(const Vec& x) const {
  const Vec d = x - center;
  return (scale * amplitude * std::exp(-sharpness * d.squaredNorm()) * -2.0 * sharpness) * d;
}

ControlProblem eikonal_plus(int dim, double amplitude) {
  const BumpSpeed c = BumpSpeed::standard(dim, amplitude);
  ControlProblem pr;
  pr.name = "eikonal+";
  pr.dim = dim;
  pr.hamiltonian = [c](const Vec& x, const Vec& p, double) { return c.value(x) * p.norm(); };
  pr.grad_x_hamiltonian = [c](const Vec& x, const Vec& p, double) -> Vec { return c.grad(x) * p.norm(); };
  pr.grad_p_hamiltonian = [c](const Vec& x, const Vec& p, double) -> Vec {
    return c.value(x) * unit_or_zero(p);
  };
  pr.p_update = shrink2_rule([c](const Vec& x, double) { return c.value(x); });
  pr.x_update = gradient_rule();
  pr.initial_data = quadratic_initial_data(ellipse_quadratic(dim));
  return pr;
}

ControlProblem eikonal_minus(int dim) {
  const BumpSpeed c = BumpSpeed::standard(dim);
  auto reduced = std::make_shared<ControlProblem>(eikonal_plus(dim));
  reduced->name = "eikonal+ on -g";
  reduced->initial_data = negated_quadratic_initial_data(ellipse_quadratic(dim));

  ControlProblem pr;
  pr.name = "eikonal-";
  pr.dim = dim;
  pr.hamiltonian = [c](const Vec& x, const Vec& p, double) { return -c.value(x) * p.norm(); };
  pr.grad_x_hamiltonian = [c](const Vec& x, const Vec& p, double) -> Vec { return -c.grad(x) * p.norm(); };
  pr.grad_p_hamiltonian = [c](const Vec& x, const Vec& p, double) -> Vec {
    return -c.value(x) * unit_or_zero(p);
  };
  pr.p_update = gradient_rule();
  pr.x_update = gradient_rule();
  pr.initial_data = quadratic_initial_data(ellipse_quadratic(dim));
  pr.reduced = std::move(reduced);
  return pr;
}

ControlProblem eikonal_time(int dim, Vec drift) {
  if (drift.size() == 0) {
    drift = Vec::Zero(dim);
    drift(0) = -1.0;
    if (dim > 1) drift(1) = 1.0;
  }
  if (drift.size() != dim) throw DimensionError("eikonal_time: drift dimension mismatch");
  const BumpSpeed c = BumpSpeed::standard(dim);
  ControlProblem pr;
  pr.name = "eikonal-t";
  pr.dim = dim;
  pr.hamiltonian = [c, drift](const Vec& x, const Vec& p, double s) {
    return c.value(x - s * drift) * p.norm();
  };
  pr.grad_x_hamiltonian = [c, drift](const Vec& x, const Vec& p, double s) -> Vec {
    return c.grad(x - s * drift) * p.norm();
  };
  pr.grad_p_hamiltonian = [c, drift](const Vec& x, const Vec& p, double s) -> Vec {
    return c.value(x - s * drift) * unit_or_zero(p);
  };
  pr.p_update = shrink2_rule([c, drift](const Vec& x, double s) { return c.value(x - s * drift); });
  pr.x_update = gradient_rule();
  pr.initial_data = quadratic_initial_data(ellipse_quadratic(dim));
  return pr;
}

GameProblem diff_norms(int dim_x, int dim_y) {
  if (dim_x < 1 || dim_y < 1) throw DimensionError("diff_norms needs positive block dimensions");
  const int d = dim_x + dim_y;
  const BumpSpeed c1 = BumpSpeed::standard(d);
  GameProblem pr;
  pr.name = fmt::format("diffnorms({},{})", dim_x, dim_y);
  pr.dim_x = dim_x;
  pr.dim_y = dim_y;
  pr.hamiltonian = [c1](const Vec& x, const Vec& y, const Vec& p, const Vec& qn, double) {
    const Vec z = stack(x, y);
    return c1.value(z) * p.norm() - c1.value(-z) * qn.norm();
  };
  // c2(z) = c1(-z) so grad c2(z) = -grad c1(-z).
  auto grad_z = [c1](const Vec& x, const Vec& y, const Vec& p, const Vec& qn) -> Vec {
    const Vec z = stack(x, y);
    return c1.grad(z) * p.norm() + c1.grad(-z) * qn.norm();
  };
  pr.grad_x = [grad_z, dim_x](const Vec& x, const Vec& y, const Vec& p, const Vec& qn, double) -> Vec {
    return grad_z(x, y, p, qn).head(dim_x);
  };
  pr.grad_y = [grad_z, dim_y](const Vec& x, const Vec& y, const Vec& p, const Vec& qn, double) -> Vec {
    return grad_z(x, y, p, qn).tail(dim_y);
  };
  pr.grad_p = [c1](const Vec& x, const Vec& y, const Vec& p, const Vec&, double) -> Vec {
    return c1.value(stack(x, y)) * unit_or_zero(p);
  };
  pr.grad_q_neg = [c1](const Vec& x, const Vec& y, const Vec&, const Vec& qn, double) -> Vec {
    return -c1.value(-stack(x, y)) * unit_or_zero(qn);
  };
  pr.p_update.kind = GameRule::Kind::closed_form_prox;
  pr.p_update.prox = [c1](const GamePoint& at, const Vec& anchor, double, double lambda) {
    return shrink2(anchor, lambda * c1.value(stack(at.x, at.y)));
  };
  // F(q) = -H(x, y, p, -q) = c2 |q| - c1 |p|.
  pr.q_update.kind = GameRule::Kind::closed_form_prox;
  pr.q_update.prox = [c1](const GamePoint& at, const Vec& anchor, double, double lambda) {
    return shrink2(anchor, lambda * c1.value(-stack(at.x, at.y)));
  };
  pr.initial_data = stacked_quadratic_data(ellipse_quadratic(d), dim_x);
  return pr;
}

GameProblem isaacs(IsaacsVariant variant) {
  const BumpSpeed c = BumpSpeed::standard(2, 3.0, 2.0);
  GameProblem pr;
  pr.name = variant == IsaacsVariant::convex ? "isaacs" : "isaacs-cc";
  pr.dim_x = 1;
  pr.dim_y = 1;
  pr.hamiltonian = [c](const Vec& x, const Vec& y, const Vec& p, const Vec& qn, double) {
    const double pp = p(0), qq = qn(0);
    return -c.value(stack(x, y)) * qq + 2.0 * std::abs(pp) - std::hypot(pp, qq) - 1.0;
  };
  pr.grad_x = [c](const Vec& x, const Vec& y, const Vec&, const Vec& qn, double) -> Vec {
    return Vec::Constant(1, -c.grad(stack(x, y))(0) * qn(0));
  };
  pr.grad_y = [c](const Vec& x, const Vec& y, const Vec&, const Vec& qn, double) -> Vec {
    return Vec::Constant(1, -c.grad(stack(x, y))(1) * qn(0));
  };
  pr.grad_p = [](const Vec&, const Vec&, const Vec& p, const Vec& qn, double) -> Vec {
    const double r = std::hypot(p(0), qn(0));
    const double sign = p(0) > 0.0 ? 1.0 : (p(0) < 0.0 ? -1.0 : 0.0);
    return Vec::Constant(1, 2.0 * sign - (r > 0.0 ? p(0) / r : 0.0));
  };
  pr.grad_q_neg = [c](const Vec& x, const Vec& y, const Vec& p, const Vec& qn, double) -> Vec {
    const double r = std::hypot(p(0), qn(0));
    return Vec::Constant(1, -c.value(stack(x, y)) - (r > 0.0 ? qn(0) / r : 0.0));
  };
  // F(p) = 2|p| - sqrt(p^2 + q^2) + ...: gradient step on the smooth part, shrink on 2|p|.
  pr.p_update.kind = GameRule::Kind::prox_gradient;
  pr.p_update.smooth_grad = [](const GamePoint& at, double) -> Vec {
    const double r = std::hypot(at.p(0), at.q(0));
    return Vec::Constant(1, r > 0.0 ? -at.p(0) / r : 0.0);
  };
  pr.p_update.prox = [](const GamePoint&, const Vec& v, double, double lambda) {
    return shrink2(v, 2.0 * lambda);
  };

  if (variant == IsaacsVariant::convex) {
    pr.initial_data = stacked_quadratic_data(ellipse_quadratic(2), 1);
  } else {
    // e(x) = -1/2 + 1/2 (2.5 x)^2, h(y) = -1/2 y^2.
    const DiagQuadratic e(-0.5, Vec::Constant(1, 1.0 / 6.25));
    const double b = 1.0;
    GameInitialData d;
    d.value = [e, b](const Vec& x, const Vec& y) { return e.value(x) - 0.5 * y.squaredNorm() / b; };
    d.grad_x = [e](const Vec& x, const Vec&) { return e.grad(x); };
    d.grad_y = [b](const Vec&, const Vec& y) -> Vec { return -y / b; };
    d.prox_x = [e](const Vec&, const Vec& v, double lambda) { return e.prox(v, lambda); };
    // argmin_y -lambda h(y) + |y - v|^2 / 2 with -h convex.
    d.prox_y_neg = [b](const Vec&, const Vec& v, double lambda) -> Vec { return v / (1.0 + lambda / b); };
    SeparableConjugates sep;
    const Conjugate ec = diag_quad_conjugate(e);
    sep.e_star = ec.value;
    sep.prox_e_star = ec.prox;
    sep.h_lower_star = [b](const Vec& r) { return -0.5 * b * r.squaredNorm(); };
    sep.prox_neg_h_lower_star = [b](const Vec& v, double lambda) -> Vec { return v / (1.0 + lambda * b); };
    d.separable = sep;
    pr.initial_data = d;
  }
  return pr;
}

Eigen::Vector3d thrust_direction(double psi, double theta, double phi) {
  const double sps = std::sin(psi), cps = std::cos(psi);
  const double sth = std::sin(theta), cth = std::cos(theta);
  const double sph = std::sin(phi), cph = std::cos(phi);
  return {sph * sps + cph * cps * sth, -cps * sph + cph * sth * sps, cth * cph};
}

ControlProblem quadcopter(const QuadcopterParams& params) {
  const double m = params.mass, grav = params.gravity;
  if (!(m > 0.0)) throw ConfigError("quadcopter mass must be positive");
  ControlProblem pr;
  pr.name = "quadcopter";
  pr.dim = 12;
  // Thrust term: max_u (u/m) <w, p_v> - u^2 = <w, p_v>^2 / (4 m^2).
  const double k = 1.0 / (4.0 * m * m);
  pr.hamiltonian = [k, grav](const Vec& x, const Vec& p, double) {
    const Eigen::Vector3d w = thrust_direction(x(3), x(4), x(5));
    const double wp = w.dot(p.segment<3>(6));
    return x.segment<3>(6).dot(p.head<3>()) + x.segment<3>(9).dot(p.segment<3>(3)) + k * wp * wp -
           p(8) * grav + 0.25 * p.tail<3>().squaredNorm() - 2.0;
  };
  pr.grad_x_hamiltonian = [k](const Vec& x, const Vec& p, double) -> Vec {
    const double psi = x(3), theta = x(4), phi = x(5);
    const double sps = std::sin(psi), cps = std::cos(psi);
    const double sth = std::sin(theta), cth = std::cos(theta);
    const double sph = std::sin(phi), cph = std::cos(phi);
    const Eigen::Vector3d pv = p.segment<3>(6);
    const Eigen::Vector3d w = thrust_direction(psi, theta, phi);
    const Eigen::Vector3d dpsi(sph * cps - cph * sps * sth, sps * sph + cph * sth * cps, 0.0);
    const Eigen::Vector3d dtheta(cph * cps * cth, cph * cth * sps, -sth * cph);
    const Eigen::Vector3d dphi(cph * sps - sph * cps * sth, -cps * cph - sph * sth * sps, -cth * sph);
    const double f = 2.0 * k * w.dot(pv);
    Vec g = Vec::Zero(12);
    g(3) = f * dpsi.dot(pv);
    g(4) = f * dtheta.dot(pv);
    g(5) = f * dphi.dot(pv);
    g.segment<3>(6) = p.head<3>();
    g.segment<3>(9) = p.segment<3>(3);
    return g;
  };
  pr.grad_p_hamiltonian = [k, grav](const Vec& x, const Vec& p, double) -> Vec {
    const Eigen::Vector3d w = thrust_direction(x(3), x(4), x(5));
    Vec g(12);
    g.head<3>() = x.segment<3>(6);
    g.segment<3>(3) = x.segment<3>(9);
    g.segment<3>(6) = 2.0 * k * w.dot(p.segment<3>(6)) * w;
    g(8) -= grav;
    g.tail<3>() = 0.5 * p.tail<3>();
    return g;
  };
  pr.p_update = gradient_rule();
  pr.x_update = gradient_rule();
  Vec a = Vec::Ones(12);
  a(0) = 0.2;
  pr.initial_data = quadratic_initial_data(DiagQuadratic(-0.5, a));
  pr.feedback = [m](const Vec& x, const Vec& p, double) -> Vec {
    // u = <w, p_v> / (2m), torques = p_omega / 2.
    const Eigen::Vector3d w = thrust_direction(x(3), x(4), x(5));
    Vec u(4);
    u(0) = w.dot(p.segment<3>(6)) / (2.0 * m);
    u.tail<3>() = 0.5 * p.tail<3>();
    return u;
  };
  return pr;
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::lax_oc: return "lax-oc";
    case SolverKind::hopf_oc: return "hopf-oc";
    case SolverKind::lax_dg: return "lax-dg";
    case SolverKind::hopf_dg: return "hopf-dg";
  }
  return "?";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "lax-oc" || text == "lax_oc") return SolverKind::lax_oc;
  if (text == "hopf-oc" || text == "hopf_oc") return SolverKind::hopf_oc;
  if (text == "lax-dg" || text == "lax_dg") return SolverKind::lax_dg;
  if (text == "hopf-dg" || text == "hopf_dg") return SolverKind::hopf_dg;
  throw ConfigError(fmt::format("unknown solver '{}'", text));
}

int stacked_dim(const AnyProblem& problem) {
  if (const auto* oc = std::get_if<ControlProblem>(&problem)) return oc->dim;
  const auto& dg = std::get<GameProblem>(problem);
  return dg.dim_x + dg.dim_y;
}

std::function<double(const Vec&, const Vec&, double)> stacked_hamiltonian(const AnyProblem& problem) {
  if (const auto* oc = std::get_if<ControlProblem>(&problem)) return oc->hamiltonian;
  const auto dg = std::get<GameProblem>(problem);
  return [dg](const Vec& z, const Vec& grad, double s) {
    return dg.hamiltonian(z.head(dg.dim_x), z.tail(dg.dim_y), grad.head(dg.dim_x),
                          grad.tail(dg.dim_y), s);
  };
}

std::function<double(const Vec&)> stacked_initial_value(const AnyProblem& problem) {
  if (const auto* oc = std::get_if<ControlProblem>(&problem)) return oc->initial_data.value;
  const auto dg = std::get<GameProblem>(problem);
  return [dg](const Vec& z) { return dg.initial_data.value(z.head(dg.dim_x), z.tail(dg.dim_y)); };
}

std::vector<std::string> registry_names() {
  return {"eikonal+", "eikonal-", "eikonal-t", "diffnorms2", "diffnorms7",
          "isaacs",   "isaacs-cc", "quadcopter"};
}

namespace {

PdhgConfig with_sigma(PdhgConfig cfg, double sigma) {
  cfg.sigma = sigma;
  cfg.tau = tau_for(sigma);
  return cfg;
}

double eikonal_sigma(const BumpSpeed& c, const Vec& x) {
  return c.grad(x).norm() > 0.001 ? 50.0 : 0.5;
}

}  // namespace

RegisteredProblem make_registered_problem(const std::string& name, int dim) {
  const int d = dim > 0 ? dim : 2;
  const bool eikonal = name == "eikonal+" || name == "eikonal-" || name == "eikonal-t";
  if (dim > 0 && !eikonal)
    throw ConfigError(fmt::format("problem '{}' has a fixed dimension", name));
  RegisteredProblem r;
  r.name = name;
  PdhgConfig base;
  base.delta = 0.02;

  if (name == "eikonal+") {
    r.problem = eikonal_plus(d);
    const BumpSpeed c = BumpSpeed::standard(d);
    r.default_config = [base, c](const Vec& x, double) { return with_sigma(base, eikonal_sigma(c, x)); };
    r.lf_alpha = {6.0, 6.0};
  } else if (name == "eikonal-") {
    r.problem = eikonal_minus(d);
    r.default_config = [base](const Vec&, double) { return with_sigma(base, 100.0); };
    r.lf_alpha = {6.0, 6.0};
  } else if (name == "eikonal-t") {
    r.problem = eikonal_time(d);
    const BumpSpeed c = BumpSpeed::standard(d);
    Vec drift = Vec::Zero(d);
    drift(0) = -1.0;
    if (d > 1) drift(1) = 1.0;
    r.default_config = [base, c, drift](const Vec& x, double t) {
      return with_sigma(base, eikonal_sigma(c, x - t * drift));
    };
    r.lf_alpha = {6.0, 6.0};
  } else if (name == "diffnorms2" || name == "diffnorms7") {
    r.problem = name == "diffnorms2" ? diff_norms(1, 1) : diff_norms(1, 6);
    r.default_solver = SolverKind::lax_dg;
    PdhgConfig cfg = with_sigma(base, 50.0);
    cfg.restart_policy = RestartPolicy::bump_sigma;
    cfg.sigma_bump = 20.0;
    cfg.max_restarts = 3;
    cfg.value_tol = 1e-6;
    r.default_config = [cfg](const Vec&, double) { return cfg; };
    r.lf_alpha = {6.0, 6.0};
  } else if (name == "isaacs") {
    r.problem = isaacs(IsaacsVariant::convex);
    r.default_solver = SolverKind::lax_dg;
    PdhgConfig cfg = with_sigma(base, 20.0);
    cfg.delta = 0.005;
    cfg.restart_policy = RestartPolicy::reinit;
    cfg.max_restarts = 2;
    cfg.value_tol = 1e-6;
    cfg.stop_on_value = true;
    r.default_config = [cfg](const Vec&, double) { return cfg; };
    r.lf_alpha = {4.5, 13.5};
  } else if (name == "isaacs-cc") {
    r.problem = isaacs(IsaacsVariant::convex_concave);
    r.default_solver = SolverKind::hopf_dg;
    PdhgConfig cfg = base;
    cfg.delta = 0.005;
    cfg.restart_policy = RestartPolicy::reinit;
    cfg.max_restarts = 2;
    cfg.value_tol = 1e-6;
    r.default_config = [cfg](const Vec&, double t) {
      return with_sigma(cfg, t <= 0.075 + 1e-12 ? 2.0 : 10.0);
    };
    r.lf_alpha = {4.5, 13.5};
  } else if (name == "quadcopter") {
    r.problem = quadcopter();
    r.default_solver = SolverKind::hopf_oc;
    PdhgConfig cfg = with_sigma(base, 5.0);
    cfg.delta = 0.005;
    r.default_config = [cfg](const Vec&, double) { return cfg; };
  } else {
    throw ConfigError(fmt::format("unknown problem '{}'", name));
  }
  return r;
}

PdhgConfig quadcopter_trajectory_config() {
  PdhgConfig cfg;
  cfg.delta = 0.05;
  cfg.sigma = 11.0;
  cfg.tau = tau_for(11.0, 0.24);
  return cfg;
}

Vec quadcopter_trajectory_target() {
  Vec x(12);
  x << 0.36, -0.62, -0.06, 0.23, 0.85, -0.66, 0.72, -0.45, 0.15, -0.75, 0.04, -0.83;
  return x;
}

}  // namespace hjsplit
