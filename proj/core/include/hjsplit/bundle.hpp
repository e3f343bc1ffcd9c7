#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjsplit/config.hpp"
#include "hjsplit/time_grid.hpp"
#include "hjsplit/types.hpp"

namespace hjsplit {

/// Time-indexed iterates of one solve. Each block is dim x slot_count with
/// column `grid.slot(j)` holding time index j. The y/q/w blocks are empty
/// (zero rows) for optimal-control problems.
struct TrajectoryBundle {
  Scheme scheme = Scheme::lax;
  Mat x, p, z;
  Mat y, q, w;

  int slots() const { return static_cast<int>(x.cols()); }
  bool is_game() const { return y.rows() > 0; }
};

enum class StopReason { tol, value_tol, max_count };

const char* to_string(StopReason reason);

struct SolveReport {
  double fval = 0.0;
  /// Total iterations, summed over restarts.
  int iterations = 0;
  /// True only when the squared-update test held at the final iterate.
  bool converged = false;
  StopReason stop_reason = StopReason::max_count;
  int restarts = 0;
  double sigma = 0.0;
  double tau = 0.0;
  TimeGrid grid;
  TrajectoryBundle trajectory;
  /// max(|dx|^2, |dp|^2, ...) per iteration when record_history is set.
  std::vector<double> residual_history;

  /// Converged, stopped on the value test, or capped with accept_at_cap.
  bool accepted(const PdhgConfig& cfg) const {
    return converged || stop_reason == StopReason::value_tol ||
           (cfg.accept_at_cap && stop_reason == StopReason::max_count);
  }
};

/// Random start: every free x_j within init_radius (sup norm) of the
/// target, x_N = target, every p_j within init_radius of 0, z = x.
/// The Lax p_0 slot is fixed at 0. Draw order is x then p.
TrajectoryBundle random_init(int dim, const Vec& target, const PdhgConfig& cfg,
                             const TimeGrid& grid);

/// Game variant: draws x, y, p, q in that order; w = y.
TrajectoryBundle random_init_game(int dim_x, int dim_y, const Vec& target_x,
                                  const Vec& target_y, const PdhgConfig& cfg,
                                  const TimeGrid& grid);

/// splitmix64 finalizer; used to derive per-point and per-restart seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace hjsplit
