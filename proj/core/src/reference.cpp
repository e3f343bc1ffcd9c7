#include "hjsplit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hjsplit {

std::vector<Field2D> lax_friedrichs_2d(
    const std::function<double(const Vec&, const Vec&, double)>& hamiltonian,
    const std::function<double(const Vec&)>& initial, const LaxFriedrichsOptions& o,
    const std::vector<double>& times) {
  if (!(o.cfl > 0.0 && o.cfl < 1.0))
    throw ConfigError(fmt::format("Lax-Friedrichs needs 0 < cfl < 1, got {}", o.cfl));
  if (!(o.mesh > 0.0)) throw ConfigError("Lax-Friedrichs mesh must be positive");
  if (!(o.alpha[0] > 0.0 && o.alpha[1] > 0.0))
    throw ConfigError("Lax-Friedrichs dissipation coefficients must be positive");
  if (o.ghost_cells < 1) throw ConfigError("Lax-Friedrichs needs at least one ghost cell");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0)) throw ConfigError("Lax-Friedrichs times must be non-negative");
    if (k > 0 && times[k] < times[k - 1]) throw ConfigError("Lax-Friedrichs times must be ascending");
  }

  const double h = o.mesh;
  const int G = o.ghost_cells;
  const std::vector<double> a_nodes = uniform_nodes(o.a_min, o.a_max, h);
  const std::vector<double> b_nodes = uniform_nodes(o.b_min, o.b_max, h);
  const int na = static_cast<int>(a_nodes.size()) + 2 * G;
  const int nb = static_cast<int>(b_nodes.size()) + 2 * G;
  auto coord_a = [&](int i) { return o.a_min + (i - G) * h; };
  auto coord_b = [&](int j) { return o.b_min + (j - G) * h; };

  Mat phi(na, nb);
  Vec z(2);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      z << coord_a(i), coord_b(j);
      phi(i, j) = initial(z);
    }

  const double dt_max = o.cfl * h / (o.alpha[0] + o.alpha[1]);
  Mat next = phi;
  Vec grad(2);
  auto advance = [&](double s, double dt) {
    for (int i = 1; i < na - 1; ++i)
      for (int j = 1; j < nb - 1; ++j) {
        const double c = phi(i, j);
        const double e = phi(i + 1, j), w = phi(i - 1, j), n = phi(i, j + 1), so = phi(i, j - 1);
        z << coord_a(i), coord_b(j);
        grad << (e - w) / (2.0 * h), (n - so) / (2.0 * h);
        const double numerical = hamiltonian(z, grad, s) - 0.5 * o.alpha[0] * (e - 2.0 * c + w) / h -
                                 0.5 * o.alpha[1] * (n - 2.0 * c + so) / h;
        next(i, j) = c - dt * numerical;
      }
    for (int j = 1; j < nb - 1; ++j) {
      next(0, j) = 2.0 * next(1, j) - next(2, j);
      next(na - 1, j) = 2.0 * next(na - 2, j) - next(na - 3, j);
    }
    for (int i = 0; i < na; ++i) {
      next(i, 0) = 2.0 * next(i, 1) - next(i, 2);
      next(i, nb - 1) = 2.0 * next(i, nb - 2) - next(i, nb - 3);
    }
    phi.swap(next);
  };

  std::vector<Field2D> out;
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0.0) {
      const int steps = static_cast<int>(std::ceil(span / dt_max - 1e-12));
      const double dt = span / steps;
      for (int k = 0; k < steps; ++k) advance(now + k * dt, dt);
      now = target;
    }
    Field2D f;
    f.t = target;
    f.a_nodes = a_nodes;
    f.b_nodes = b_nodes;
    f.values = phi.block(G, G, static_cast<Eigen::Index>(a_nodes.size()),
                         static_cast<Eigen::Index>(b_nodes.size()));
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

// Golden-section minimization of f on [lo, hi].
template <class F>
std::pair<double, double> golden(F&& f, double lo, double hi, int iterations = 80) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations && hi - lo > 1e-15; ++k) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace

double brute_force_lax(const std::function<double(const Vec&)>& g, double speed, const Vec& x,
                       double t) {
  if (x.size() != 2) throw DimensionError("brute_force_lax works in two dimensions");
  if (!(speed >= 0.0) || !(t >= 0.0)) throw ConfigError("brute_force_lax needs speed, t >= 0");
  const double radius = speed * t;
  if (radius == 0.0) return g(x);

  constexpr int kRadial = 400, kAngular = 400;
  const double two_pi = 2.0 * std::numbers::pi;
  auto eval = [&](double r, double th) {
    Vec y(2);
    y << x(0) + r * std::cos(th), x(1) + r * std::sin(th);
    return g(y);
  };
  double best = g(x), best_r = 0.0, best_th = 0.0;
  for (int i = 1; i < kRadial; ++i) {
    const double r = radius * i / (kRadial - 1);
    for (int j = 0; j < kAngular; ++j) {
      const double th = two_pi * j / kAngular;
      const double v = eval(r, th);
      if (v < best) {
        best = v;
        best_r = r;
        best_th = th;
      }
    }
  }
  const double dr = radius / (kRadial - 1), dth = two_pi / kAngular;
  for (int sweep = 0; sweep < 4; ++sweep) {
    auto [r, fr] = golden([&](double rr) { return eval(rr, best_th); }, std::max(0.0, best_r - dr),
                          std::min(radius, best_r + dr));
    if (fr < best) {
      best = fr;
      best_r = r;
    }
    auto [th, fth] = golden([&](double tt) { return eval(best_r, tt); }, best_th - dth, best_th + dth);
    if (fth < best) {
      best = fth;
      best_th = th;
    }
  }
  return best;
}

ControlProblem quadratic_test_problem(const QuadraticTestSpec& spec) {
  const double kappa = spec.kappa, a = spec.g_a, b = spec.g_b, c = spec.g_c;
  ControlProblem pr;
  pr.name = "quadratic-test";
  pr.dim = 1;
  pr.hamiltonian = [kappa](const Vec& x, const Vec& p, double) {
    return 0.5 * p.squaredNorm() + 0.5 * kappa * x.squaredNorm();
  };
  pr.grad_x_hamiltonian = [kappa](const Vec& x, const Vec&, double) -> Vec { return kappa * x; };
  pr.grad_p_hamiltonian = [](const Vec&, const Vec& p, double) -> Vec { return p; };
  pr.p_update.kind = OcRule::Kind::closed_form_prox;
  pr.p_update.prox = [](const OcPoint&, const Vec& v, double, double lambda) -> Vec {
    return v / (1.0 + lambda);
  };
  pr.x_update.kind = OcRule::Kind::closed_form_prox;
  pr.x_update.prox = [kappa](const OcPoint&, const Vec& v, double, double lambda) -> Vec {
    if (!(lambda * kappa < 1.0)) throw ConfigError("x-step too large for the concave -H prox");
    return v / (1.0 - lambda * kappa);
  };
  InitialData d;
  d.value = [a, b, c](const Vec& x) { return 0.5 * a * x.squaredNorm() + b * x.sum() + c; };
  d.grad = [a, b](const Vec& x) -> Vec { return (a * x.array() + b).matrix(); };
  d.prox = [a, b](const Vec& v, double lambda) -> Vec {
    return ((v.array() - lambda * b) / (1.0 + lambda * a)).matrix();
  };
  if (a > 0.0) {
    Conjugate conj;
    conj.value = [a, b, c](const Vec& p) { return (p.array() - b).square().sum() / (2.0 * a) - c; };
    conj.grad = [a, b](const Vec& p) -> Vec { return ((p.array() - b) / a).matrix(); };
    conj.prox = [a, b](const Vec& v, double lambda) -> Vec {
      return ((v.array() + lambda * b / a) / (1.0 + lambda / a)).matrix();
    };
    d.conjugate = conj;
  }
  pr.initial_data = d;
  return pr;
}

TrajectoryBundle kkt_linear_oracle(const QuadraticTestSpec& spec, const TimeGrid& grid,
                                   double target) {
  if (grid.scheme != Scheme::lax) throw ConfigError("kkt_linear_oracle needs a Lax grid");
  const int n = grid.n_steps;
  const double delta = grid.delta;
  // Unknowns: x_0..x_{N-1} at 0..N-1, p_1..p_N at N..2N-1.
  const int m = 2 * n;
  auto xi = [](int j) { return j; };
  auto pi = [n](int j) { return n + j - 1; };
  Mat A = Mat::Zero(m, m);
  Vec rhs = Vec::Zero(m);
  int row = 0;
  for (int j = 1; j <= n; ++j, ++row) {
    if (j < n) A(row, xi(j)) += 1.0;
    else rhs(row) -= target;
    A(row, xi(j - 1)) -= 1.0;
    A(row, pi(j)) -= delta;
  }
  for (int j = 1; j < n; ++j, ++row) {
    A(row, pi(j)) += 1.0;
    A(row, pi(j + 1)) -= 1.0;
    A(row, xi(j)) -= delta * spec.kappa;
  }
  A(row, xi(0)) = spec.g_a;
  A(row, pi(1)) = -1.0;
  rhs(row) = -spec.g_b;

  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw ConfigError("KKT system of the quadratic test problem is singular");
  const Vec sol = lu.solve(rhs);

  TrajectoryBundle b;
  b.scheme = Scheme::lax;
  b.x = Mat::Zero(1, n + 1);
  b.p = Mat::Zero(1, n + 1);
  for (int j = 0; j < n; ++j) b.x(0, j) = sol(xi(j));
  b.x(0, n) = target;
  for (int j = 1; j <= n; ++j) b.p(0, j) = sol(pi(j));
  b.z = b.x;
  return b;
}

}  // namespace hjsplit
