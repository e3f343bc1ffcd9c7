#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hjsplit/bundle.hpp"
#include "hjsplit/config.hpp"
#include "hjsplit/field.hpp"
#include "hjsplit/problems.hpp"

namespace hjsplit {

/// A 2-D slice {base + a e_{axis_a} + b e_{axis_b}} of the stacked state space.
struct SliceGrid {
  Vec base;
  int axis_a = 0;
  int axis_b = 1;
  double a_min = -3.0, a_max = 3.0;
  double b_min = -3.0, b_max = 3.0;
  double mesh = 0.1;

  /// Throws DimensionError/ConfigError on bad axes or mesh.
  void validate(int dim) const;
  std::vector<double> a_nodes() const { return uniform_nodes(a_min, a_max, mesh); }
  std::vector<double> b_nodes() const { return uniform_nodes(b_min, b_max, mesh); }
  Vec point(double a, double b) const;
};

/// Runs one solve of `kind` at the stacked point. Games split the point
/// into (x, y) by the problem's block dimensions.
SolveReport solve_point(const AnyProblem& problem, SolverKind kind, const Vec& point, double t,
                        const PdhgConfig& cfg);

/// Seed for node (i, j) at time index k.
std::uint64_t point_seed(std::uint64_t base_seed, int i, int j, int k);

struct PointOutcome {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool accepted = false;
  StopReason stop_reason = StopReason::max_count;
  /// Non-empty when the solve threw (divergence); value is NaN then.
  std::string error;
};

struct SliceResult {
  std::vector<Field2D> fields;
  /// outcomes[k][i * nb + j]
  std::vector<std::vector<PointOutcome>> outcomes;
  /// "k:i:j" entries for nodes whose solve threw.
  std::vector<std::string> failed_nodes;
  double mean_seconds_per_point = 0.0;

  /// Fraction of nodes at time index k with converged = true.
  double converged_fraction(std::size_t k) const;
  /// Same with accepted = true (value-test stops count).
  double accepted_fraction(std::size_t k) const;
};

struct SliceOptions {
  ConfigOverrides overrides;
  std::uint64_t base_seed = 0;
  int threads = 1;
};

/// One independent solve per (node, time); results do not depend on the
/// thread count.
SliceResult eval_slice(const RegisteredProblem& problem, SolverKind kind, const SliceGrid& slice,
                       const std::vector<double>& times, const SliceOptions& options);

/// Marching squares with linear interpolation along cell edges. Nodes with
/// value >= level count as inside; ambiguous saddle cells are split by the
/// sign of the cell-center average.
std::vector<Segment> extract_zero_level(const Field2D& field, double level = 0.0);

/// Symmetric Hausdorff distance between two segment sets, measured from
/// every endpoint of one set to the nearest segment of the other. Returns
/// 0 when both are empty and +inf when exactly one is.
double hausdorff_distance(const std::vector<Segment>& a, const std::vector<Segment>& b);

/// Least squares fits of runtime against dimension.
struct ScalingFit {
  double linear_a = 0.0, linear_b = 0.0;  // a d + b
  double quad_a = 0.0, quad_b = 0.0, quad_c = 0.0;  // a d^2 + b d + c
  double r2_linear = 0.0;
  bool degenerate = true;
};

struct ScalingRow {
  int dim = 0;
  double median_seconds = 0.0;
  double mean_seconds = 0.0;
  int iterations = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  ScalingFit fit;
};

ScalingFit fit_scaling(const std::vector<ScalingRow>& rows);

/// Times one solve per dimension, `repeats` times after an untimed warm-up,
/// with a monotonic clock.
ScalingResult scaling_run(const std::function<RegisteredProblem(int dim)>& family,
                          const std::vector<int>& dims,
                          const std::function<Vec(int dim)>& point_rule, double t,
                          const ConfigOverrides& overrides, int repeats);

}  // namespace hjsplit
