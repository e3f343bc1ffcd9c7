#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hjsplit/operators.hpp"
#include "hjsplit/pdhg_oc.hpp"
#include "hjsplit/problems.hpp"
#include "hjsplit/reference.hpp"
#include "support.hpp"

using namespace hjsplit;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

PdhgConfig constant_speed_config() {
  PdhgConfig c;
  c.sigma = 0.5;
  c.tau = tau_for(0.5);
  c.delta = 0.02;
  c.seed = 1;
  return c;
}

// H = 0 with the ellipse data; every update is an exact prox or a zero gradient.
ControlProblem zero_hamiltonian(int dim) {
  ControlProblem pr;
  pr.name = "zero";
  pr.dim = dim;
  pr.hamiltonian = [](const Vec&, const Vec&, double) { return 0.0; };
  pr.grad_x_hamiltonian = [dim](const Vec&, const Vec&, double) -> Vec { return Vec::Zero(dim); };
  pr.grad_p_hamiltonian = [dim](const Vec&, const Vec&, double) -> Vec { return Vec::Zero(dim); };
  pr.initial_data = quadratic_initial_data(ellipse_quadratic(dim));
  return pr;
}

ControlProblem constant_hamiltonian(int dim, double h0) {
  ControlProblem pr = zero_hamiltonian(dim);
  pr.hamiltonian = [h0](const Vec&, const Vec&, double) { return h0; };
  return pr;
}

double g_ellipse(const Vec& x) { return ellipse_quadratic(static_cast<int>(x.size())).value(x); }

}  // namespace

TEST(SolveLaxOc, ConstantSpeedAtOrigin) {
  const ControlProblem pr = eikonal_plus(2, 0.0);
  const SolveReport r = solve_lax_oc(pr, v2(0, 0), 0.2, constant_speed_config());
  EXPECT_TRUE(r.converged);
  const double oracle = brute_force_lax(g_ellipse, 1.0, v2(0, 0), 0.2);
  EXPECT_NEAR(oracle, -0.5, 1e-12);
  EXPECT_NEAR(r.fval, oracle, 1e-3);
}

TEST(SolveLaxOc, ConstantSpeedOffCenter) {
  const ControlProblem pr = eikonal_plus(2, 0.0);
  const SolveReport r = solve_lax_oc(pr, v2(3, 0), 0.2, constant_speed_config());
  EXPECT_TRUE(r.converged);
  const double oracle = brute_force_lax(g_ellipse, 1.0, v2(3, 0), 0.2);
  // Along the axis: min over |y - 3| <= 0.2 of -1/2 + y^2 / 12.5.
  EXPECT_NEAR(oracle, -0.5 + 2.8 * 2.8 / 12.5, 1e-9);
  EXPECT_NEAR(oracle, 0.1272, 1e-4);
  EXPECT_NEAR(r.fval, oracle, 5e-3);
}

TEST(SolveLaxOc, ShortTimeLimit) {
  const ControlProblem pr = eikonal_plus(2);
  PdhgConfig c;
  c.sigma = 50.0;
  c.tau = tau_for(50.0);
  c.delta = 0.005;
  c.init_radius = 0.0;
  const SolveReport r = solve_lax_oc(pr, v2(0, 0), 0.005, c);
  EXPECT_NEAR(r.fval, -0.5, 1e-3);
}

TEST(SolveLaxOc, TrajectoryEndsAtTarget) {
  const ControlProblem pr = eikonal_plus(2);
  const Vec x = v2(-1.0, 0.5);
  const SolveReport r = solve_lax_oc(pr, x, 0.2, make_registered_problem("eikonal+").default_config(x, 0.2));
  ASSERT_EQ(r.trajectory.slots(), 11);
  EXPECT_EQ(r.trajectory.x.col(10), x);
  EXPECT_EQ(r.trajectory.p.col(0), Vec::Zero(2));
}

TEST(SolveLaxOc, FvalMatchesOwnBundle) {
  const ControlProblem pr = eikonal_plus(2);
  const Vec x = v2(0.5, -1.0);
  const SolveReport r = solve_lax_oc(pr, x, 0.1, make_registered_problem("eikonal+").default_config(x, 0.1));
  EXPECT_NEAR(fval_lax_oc(pr, r.trajectory, r.grid), r.fval, 1e-14);
}

TEST(SolveLaxOc, Deterministic) {
  const ControlProblem pr = eikonal_plus(2);
  const Vec x = v2(1.0, 1.5);
  const PdhgConfig c = make_registered_problem("eikonal+").default_config(x, 0.2);
  const SolveReport a = solve_lax_oc(pr, x, 0.2, c), b = solve_lax_oc(pr, x, 0.2, c);
  EXPECT_EQ(a.fval, b.fval);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.trajectory.x, b.trajectory.x);
  EXPECT_EQ(a.trajectory.p, b.trajectory.p);
}

TEST(SolveLaxOc, ConvergedOnlyWhenTestHolds) {
  const ControlProblem pr = eikonal_plus(2);
  const Vec x = v2(-0.5, 0.5);
  PdhgConfig c = make_registered_problem("eikonal+").default_config(x, 0.2);
  c.record_history = true;
  const SolveReport r = solve_lax_oc(pr, x, 0.2, c);
  ASSERT_TRUE(r.converged);
  ASSERT_FALSE(r.residual_history.empty());
  EXPECT_LT(r.residual_history.back(), c.tol);
  for (std::size_t k = 0; k + 1 < r.residual_history.size(); ++k) EXPECT_GE(r.residual_history[k], c.tol);

  c.max_count = 5;
  const SolveReport capped = solve_lax_oc(pr, x, 0.2, c);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.stop_reason, StopReason::max_count);
}

TEST(SolveLaxOc, GuardRejectsStepBudget) {
  PdhgConfig c;
  c.sigma = 4.0;
  c.tau = 0.0625;
  EXPECT_THROW(solve_lax_oc(eikonal_plus(2), v2(0, 0), 0.2, c), ConfigError);
  EXPECT_THROW(solve_hopf_oc(quadcopter(), Vec::Zero(12), 0.025, c), ConfigError);
}

TEST(SolveLaxOc, DimensionMismatch) {
  EXPECT_THROW(solve_lax_oc(eikonal_plus(3), v2(0, 0), 0.2, PdhgConfig{}), DimensionError);
}

TEST(SolveLaxOc, DivergenceCarriesIteration) {
  // Gradient ascent on x through -H = -K x^2 / 2 grows like (1 + lambda K)^k.
  ControlProblem pr = zero_hamiltonian(1);
  const double k = 1e4;
  pr.hamiltonian = [k](const Vec& x, const Vec& p, double) { return 0.5 * p.squaredNorm() + 0.5 * k * x.squaredNorm(); };
  pr.grad_x_hamiltonian = [k](const Vec& x, const Vec&, double) -> Vec { return k * x; };
  pr.grad_p_hamiltonian = [](const Vec&, const Vec& p, double) -> Vec { return p; };
  PdhgConfig c;
  c.sigma = 1.0;
  c.tau = tau_for(1.0);
  c.delta = 0.1;
  c.seed = 2;
  try {
    solve_lax_oc(pr, Vec::Constant(1, 1.0), 1.0, c);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.iteration(), 1u);
    EXPECT_LT(e.iteration(), 2000u);
  }
}

TEST(SolveLaxOc, RestartsBumpSigma) {
  const ControlProblem pr = eikonal_plus(2);
  PdhgConfig c;
  c.max_count = 3;
  c.max_restarts = 2;
  c.sigma = 50.0;
  c.tau = tau_for(50.0);
  const SolveReport r = solve_lax_oc(pr, v2(1, 1), 0.2, c);
  EXPECT_EQ(r.restarts, 2);
  EXPECT_EQ(r.iterations, 9);
  EXPECT_EQ(r.sigma, 90.0);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.stop_reason, StopReason::max_count);
}

TEST(SolveLaxOc, AnchorVariantsDifferOffSaddle) {
  const ControlProblem pr = eikonal_plus(2);
  const TimeGrid g = make_time_grid(0.1, 0.02, Scheme::lax);
  PdhgConfig c;
  c.seed = 3;
  const TrajectoryBundle start = random_init(2, v2(1, 0), c, g);
  TrajectoryBundle a = start, b = start;
  lax_oc_iteration(pr, v2(1, 0), g, c, a);
  c.anchor = AnchorVariant::main_text;
  lax_oc_iteration(pr, v2(1, 0), g, c, b);
  EXPECT_EQ(a.p, b.p);
  EXPECT_NE(a.x, b.x);
}

TEST(SignFlip, EikonalMinusIsNegatedReducedSolve) {
  const ControlProblem minus = eikonal_minus(2);
  ASSERT_TRUE(minus.reduced);
  PdhgConfig c;
  c.sigma = 100.0;
  c.tau = tau_for(100.0);
  c.seed = 9;
  for (const Vec& x : {v2(0.3, -1.0), v2(2.0, 1.0)}) {
    const SolveReport a = solve_lax_oc(minus, x, 0.2, c);
    const SolveReport b = solve_lax_oc(*minus.reduced, x, 0.2, c);
    EXPECT_EQ(a.fval, -b.fval);
    EXPECT_EQ(a.trajectory.p, Mat(-b.trajectory.p));
    EXPECT_EQ(a.trajectory.x, b.trajectory.x);
  }
}

TEST(Fval, ZeroBundle) {
  const ControlProblem pr = zero_hamiltonian(2);
  const TimeGrid g = make_time_grid(0.1, 0.02, Scheme::lax);
  TrajectoryBundle b;
  b.x = b.z = b.p = Mat::Zero(2, g.slot_count());
  EXPECT_EQ(fval_lax_oc(pr, b, g), -0.5);
  EXPECT_EQ(fval_lax_oc_forward(pr, b, g), -0.5);
}

TEST(Fval, ZeroCostateKeepsOnlyDataAndH) {
  const ControlProblem pr = eikonal_plus(2);
  const TimeGrid g = make_time_grid(0.1, 0.02, Scheme::lax);
  PdhgConfig c;
  c.seed = 4;
  c.init_radius = 1.0;
  TrajectoryBundle b = random_init(2, v2(0.5, 0.5), c, g);
  b.p.setZero();
  EXPECT_NEAR(fval_lax_oc(pr, b, g), g_ellipse(b.x.col(0)), 1e-15);
  ControlProblem shifted = constant_hamiltonian(2, 0.7);
  EXPECT_NEAR(fval_lax_oc(shifted, b, g), g_ellipse(b.x.col(0)) - 0.02 * 5 * 0.7, 1e-14);
  EXPECT_NEAR(fval_lax_oc_forward(shifted, b, g), g_ellipse(b.x.col(0)) - 0.02 * 5 * 0.7, 1e-14);
}

TEST(Fval, ShapeMismatch) {
  const ControlProblem pr = zero_hamiltonian(2);
  const TimeGrid g = make_time_grid(0.1, 0.02, Scheme::lax);
  TrajectoryBundle b;
  b.x = b.z = b.p = Mat::Zero(2, 3);
  EXPECT_THROW(fval_lax_oc(pr, b, g), DimensionError);
}

TEST(Fval, AveragedCloserForConstantSpeed) {
  const ControlProblem pr = eikonal_plus(2, 0.0);
  const Vec x = v2(3, 0);
  PdhgConfig c = constant_speed_config();
  const SolveReport r = solve_lax_oc(pr, x, 0.2, c);
  ASSERT_TRUE(r.converged);
  const double oracle = brute_force_lax(g_ellipse, 1.0, x, 0.2);
  const double back = fval_lax_oc(pr, r.trajectory, r.grid);
  const double fwd = fval_lax_oc_forward(pr, r.trajectory, r.grid);
  const double avg = fval_lax_oc_averaged(pr, r.trajectory, r.grid);
  EXPECT_DOUBLE_EQ(avg, 0.5 * (back + fwd));
  EXPECT_LE(std::abs(avg - oracle), std::min(std::abs(back - oracle), std::abs(fwd - oracle)) + 1e-12);
}

TEST(Kkt, OracleBundleIsStationary) {
  for (const QuadraticTestSpec& spec :
       {QuadraticTestSpec{0.0, 1.0, 0.0, 0.0}, QuadraticTestSpec{0.3, 2.0, -0.4, 0.1}}) {
    const ControlProblem pr = quadratic_test_problem(spec);
    const TimeGrid g = make_time_grid(0.5, 0.1, Scheme::lax);
    const TrajectoryBundle b = kkt_linear_oracle(spec, g, 0.8);
    const KktResidual r = kkt_residual_oc(pr, b, g);
    EXPECT_LE(r.r_p, 1e-10);
    EXPECT_LE(r.r_x, 1e-10);
    EXPECT_LE(r.r_0, 1e-10);
  }
}

TEST(Kkt, RandomBundleIsNot) {
  const ControlProblem pr = quadratic_test_problem({});
  const TimeGrid g = make_time_grid(0.5, 0.1, Scheme::lax);
  PdhgConfig c;
  c.seed = 8;
  const TrajectoryBundle b = random_init(1, Vec::Constant(1, 0.8), c, g);
  const KktResidual r = kkt_residual_oc(pr, b, g);
  EXPECT_GT(r.r_p, 0.0);
  EXPECT_GT(r.r_x + r.r_0, 0.0);
}

TEST(FixedPoint, OneIterationDoesNotMoveSaddle) {
  const QuadraticTestSpec spec{0.5, 1.5, 0.2, -0.3};
  const ControlProblem pr = quadratic_test_problem(spec);
  const TimeGrid g = make_time_grid(0.4, 0.05, Scheme::lax);
  const TrajectoryBundle saddle = kkt_linear_oracle(spec, g, -0.6);
  for (AnchorVariant a : {AnchorVariant::appendix, AnchorVariant::main_text}) {
    PdhgConfig c;
    c.sigma = 3.0;
    c.tau = tau_for(3.0);
    c.anchor = a;
    TrajectoryBundle b = saddle;
    lax_oc_iteration(pr, Vec::Constant(1, -0.6), g, c, b);
    EXPECT_LT((b.x - saddle.x).norm(), 1e-9);
    EXPECT_LT((b.p - saddle.p).norm(), 1e-9);
  }
}

TEST(SolveLaxOc, QuadraticProblemReachesOracle) {
  const QuadraticTestSpec spec{0.0, 1.0, 0.0, 0.0};
  const ControlProblem pr = quadratic_test_problem(spec);
  PdhgConfig c;
  c.sigma = 1.0;
  c.tau = tau_for(1.0);
  c.delta = 0.1;
  c.tol = 1e-14;
  c.max_count = 200000;
  const SolveReport r = solve_lax_oc(pr, Vec::Constant(1, 0.8), 0.5, c);
  ASSERT_TRUE(r.converged);
  const TrajectoryBundle oracle = kkt_linear_oracle(spec, r.grid, 0.8);
  EXPECT_NEAR(r.fval, fval_lax_oc(pr, oracle, r.grid), 1e-6);
  EXPECT_LT((r.trajectory.x - oracle.x).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(SolveHopfOc, ZeroHamiltonianRecoversData) {
  const ControlProblem pr = zero_hamiltonian(2);
  PdhgConfig c;
  c.sigma = 1.0;
  c.tau = tau_for(1.0);
  c.delta = 0.1;
  c.tol = 1e-14;
  for (const Vec& x : {v2(0, 0), v2(1.0, -0.5), v2(-2.0, 2.0)}) {
    const SolveReport r = solve_hopf_oc(pr, x, 0.1, c);
    EXPECT_EQ(r.grid.n_steps, 1);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.fval, g_ellipse(x), 1e-6);
  }
}

TEST(SolveHopfOc, MissingConjugate) {
  ControlProblem pr = zero_hamiltonian(2);
  pr.initial_data.conjugate.reset();
  EXPECT_THROW(solve_hopf_oc(pr, v2(0, 0), 0.1, PdhgConfig{}), ConfigError);
}

TEST(SolveHopfOc, QuadcopterShortHorizon) {
  const ControlProblem pr = quadcopter();
  PdhgConfig c;
  c.sigma = 5.0;
  c.tau = tau_for(5.0);
  c.delta = 0.005;
  const SolveReport r = solve_hopf_oc(pr, Vec::Zero(12), 0.025, c);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(std::isfinite(r.fval));
  EXPECT_NEAR(fval_hopf_oc(pr, r.trajectory, r.grid, Vec::Zero(12)), r.fval, 1e-14);
  const TrajectoryBundle lax = hopf_to_lax_bundle(pr, r.trajectory);
  EXPECT_EQ(lax.slots(), r.grid.n_steps + 1);
  EXPECT_EQ(lax.x.col(r.grid.n_steps), Vec::Zero(12));
}

TEST(SolveHopfOc, AgreesWithLaxForConvexCase) {
  // Constant-speed eikonal with convex data: both formulas give the same value.
  const ControlProblem pr = eikonal_plus(2, 0.0);
  PdhgConfig c = constant_speed_config();
  const SolveReport lax = solve_lax_oc(pr, v2(1.5, 1.0), 0.2, c);
  c.sigma = 5.0;
  c.tau = tau_for(5.0);
  const SolveReport hopf = solve_hopf_oc(pr, v2(1.5, 1.0), 0.2, c);
  ASSERT_TRUE(lax.converged);
  ASSERT_TRUE(hopf.converged);
  const double oracle = brute_force_lax(g_ellipse, 1.0, v2(1.5, 1.0), 0.2);
  EXPECT_NEAR(lax.fval, oracle, 5e-3);
  EXPECT_NEAR(hopf.fval, oracle, 5e-3);
}
