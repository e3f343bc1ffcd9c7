#pragma once

#include <functional>

#include "hjsplit/bundle.hpp"
#include "hjsplit/config.hpp"
#include "hjsplit/problem.hpp"
#include "hjsplit/time_grid.hpp"

namespace hjsplit::detail {

/// One block update: minimizes F(u) + |u - anchor|^2 / (2 step) with
/// lambda = step * delta. `grad_f` returns grad F at the current point and
/// is only evaluated for gradient steps.
template <class Point, class GradF>
Vec apply_rule(const ProxRule<Point>& rule, const Point& at, const Vec& anchor, double s,
               double lambda, GradF&& grad_f) {
  using Kind = typename ProxRule<Point>::Kind;
  switch (rule.kind) {
    case Kind::closed_form_prox:
      return rule.prox(at, anchor, s, lambda);
    case Kind::prox_gradient:
      return rule.prox(at, anchor - lambda * rule.smooth_grad(at, s), s, lambda);
    case Kind::gradient_step:
    default:
      return anchor - lambda * grad_f();
  }
}

struct LoopHooks {
  std::function<TrajectoryBundle(std::uint64_t seed)> init;
  /// Advances the bundle one iteration with the step sizes carried in cfg.
  std::function<void(const PdhgConfig& cfg, TrajectoryBundle& bundle)> step;
  std::function<double(const TrajectoryBundle& bundle)> fval;
};

/// Shared iteration driver: stopping tests, value fallback, restarts and
/// divergence detection.
SolveReport run_pdhg(const PdhgConfig& cfg, const TimeGrid& grid, const LoopHooks& hooks);

void check_bundle_shape(const TrajectoryBundle& bundle, const TimeGrid& grid, int dim_x,
                        int dim_y);

}  // namespace hjsplit::detail
