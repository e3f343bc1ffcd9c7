#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "detail.hpp"

namespace hjsplit::detail {

namespace {

bool all_finite(const TrajectoryBundle& b) {
  return b.x.allFinite() && b.p.allFinite() && b.z.allFinite() && b.y.allFinite() &&
         b.q.allFinite() && b.w.allFinite();
}

double sq(const Mat& a, const Mat& b) { return a.size() == 0 ? 0.0 : (a - b).squaredNorm(); }

double relative_change(double previous, double current) {
  const double change = std::abs(current - previous);
  if (change == 0.0) return 0.0;
  return change / std::min(std::abs(current), 1.0);
}

}  // namespace

void check_bundle_shape(const TrajectoryBundle& bundle, const TimeGrid& grid, int dim_x, int dim_y) {
  const int slots = grid.slot_count();
  auto check = [&](const Mat& m, int rows, const char* name) {
    if (m.rows() != rows || m.cols() != slots)
      throw DimensionError(fmt::format("bundle block {} is {}x{}, expected {}x{}", name, m.rows(),
                                       m.cols(), rows, slots));
  };
  if (bundle.scheme != grid.scheme) throw DimensionError("bundle scheme does not match the time grid");
  check(bundle.x, dim_x, "x");
  check(bundle.p, dim_x, "p");
  if (dim_y > 0) {
    check(bundle.y, dim_y, "y");
    check(bundle.q, dim_y, "q");
  }
}

SolveReport run_pdhg(const PdhgConfig& cfg, const TimeGrid& grid, const LoopHooks& hooks) {
  PdhgConfig live = cfg;
  TrajectoryBundle bundle = hooks.init(cfg.seed);
  SolveReport report;
  report.grid = grid;

  const bool value_test = cfg.value_tol > 0.0;
  int total = 0;
  int restarts = 0;
  constexpr int kValueWindow = 10;

  for (;;) {
    std::deque<double> recent;
    bool done = false;
    for (int it = 0; it < cfg.max_count; ++it) {
      TrajectoryBundle previous = bundle;
      hooks.step(live, bundle);
      ++total;
      if (!all_finite(bundle))
        throw DivergenceError(fmt::format("non-finite iterate at iteration {}", total),
                              static_cast<std::size_t>(total));
      const double dx = std::max(sq(bundle.x, previous.x), sq(bundle.y, previous.y));
      const double dp = std::max(sq(bundle.p, previous.p), sq(bundle.q, previous.q));
      if (cfg.record_history) report.residual_history.push_back(std::max(dx, dp));
      if (dx < cfg.tol && dp < cfg.tol) {
        report.converged = true;
        report.stop_reason = StopReason::tol;
        done = true;
        break;
      }
      const bool near_cap = it >= cfg.max_count - (kValueWindow + 1);
      if (value_test && (cfg.stop_on_value || near_cap)) {
        const double f = hooks.fval(bundle);
        if (!std::isfinite(f))
          throw DivergenceError(fmt::format("non-finite objective at iteration {}", total),
                                static_cast<std::size_t>(total));
        recent.push_back(f);
        if (static_cast<int>(recent.size()) > kValueWindow + 1) recent.pop_front();
        if (cfg.stop_on_value && recent.size() >= 2 &&
            relative_change(recent[recent.size() - 2], recent.back()) < cfg.value_tol) {
          report.stop_reason = StopReason::value_tol;
          done = true;
          break;
        }
      }
    }
    if (done) break;

    const bool can_restart =
        restarts < cfg.max_restarts && cfg.restart_policy != RestartPolicy::accept_at_cap;
    if (can_restart) {
      ++restarts;
      if (cfg.restart_policy == RestartPolicy::bump_sigma) {
        const StepSizes next = adapt_sigma({live.sigma, live.tau}, cfg);
        live.sigma = next.sigma;
        live.tau = next.tau;
      } else {
        bundle = hooks.init(mix_seed(cfg.seed, static_cast<std::uint64_t>(restarts)));
      }
      continue;
    }

    report.stop_reason = StopReason::max_count;
    if (value_test && !cfg.stop_on_value && static_cast<int>(recent.size()) == kValueWindow + 1) {
      double worst = 0.0;
      for (std::size_t i = 1; i < recent.size(); ++i)
        worst = std::max(worst, relative_change(recent[i - 1], recent[i]));
      if (worst < cfg.value_tol) report.stop_reason = StopReason::value_tol;
    }
    break;
  }

  report.iterations = total;
  report.restarts = restarts;
  report.sigma = live.sigma;
  report.tau = live.tau;
  report.fval = hooks.fval(bundle);
  if (!std::isfinite(report.fval))
    throw DivergenceError(fmt::format("non-finite objective at iteration {}", total),
                          static_cast<std::size_t>(total));
  report.trajectory = std::move(bundle);
  return report;
}

}  // namespace hjsplit::detail
