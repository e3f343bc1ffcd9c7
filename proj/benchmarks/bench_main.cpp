#include <benchmark/benchmark.h>

#include "hjsplit/grid_eval.hpp"
#include "hjsplit/operators.hpp"
#include "hjsplit/reference.hpp"

using namespace hjsplit;

static void BM_ApplyDLax(benchmark::State& state) {
  const Mat x = Mat::Random(state.range(0), 21);
  for (auto _ : state) benchmark::DoNotOptimize(apply_Dt_lax(apply_D_lax(x)));
}
BENCHMARK(BM_ApplyDLax)->Arg(2)->Arg(100)->Arg(400);

static void BM_Shrink2(benchmark::State& state) {
  const Vec v = Vec::Random(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shrink2(v, 0.3));
}
BENCHMARK(BM_Shrink2)->Arg(2)->Arg(400);

// One grid-free evaluation at the registry defaults.
static void BM_SolvePoint(benchmark::State& state, const char* name, double t) {
  const RegisteredProblem reg = make_registered_problem(name);
  Vec x = Vec::Zero(stacked_dim(reg.problem));
  x(0) = 0.6;
  x(1) = -0.3;
  const PdhgConfig cfg = reg.default_config(x, t);
  for (auto _ : state) benchmark::DoNotOptimize(solve_point(reg.problem, reg.default_solver, x, t, cfg).fval);
}
BENCHMARK_CAPTURE(BM_SolvePoint, eikonal_plus, "eikonal+", 0.2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolvePoint, diffnorms2, "diffnorms2", 0.2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolvePoint, isaacs_cc, "isaacs-cc", 0.05)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolvePoint, quadcopter, "quadcopter", 0.05)->Unit(benchmark::kMillisecond);

static void BM_LaxFriedrichs(benchmark::State& state) {
  const RegisteredProblem reg = make_registered_problem("eikonal+");
  LaxFriedrichsOptions o;
  o.a_min = o.b_min = -3;
  o.a_max = o.b_max = 3;
  o.mesh = 0.2 / static_cast<double>(state.range(0));
  o.alpha = reg.lf_alpha;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lax_friedrichs_2d(stacked_hamiltonian(reg.problem), stacked_initial_value(reg.problem), o, {0.2}));
}
BENCHMARK(BM_LaxFriedrichs)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
