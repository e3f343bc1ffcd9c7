#pragma once

#include <vector>

#include "hjsplit/types.hpp"

namespace hjsplit {

/// Uniform time discretization 0 = s_0 < s_1 < ... < s_N = t_final.
///
/// `delta` is stored as t_final / N so that s_N hits t_final exactly.
/// Lax bundles expose indices 0..N and Hopf bundles 1..N; `slot(j)` maps a
/// time index to the bundle column.
struct TimeGrid {
  double t_final = 0.0;
  double delta = 0.0;
  int n_steps = 0;
  Scheme scheme = Scheme::lax;

  double node(int j) const { return j == n_steps ? t_final : j * delta; }
  int first_index() const { return scheme == Scheme::lax ? 0 : 1; }
  int slot_count() const { return scheme == Scheme::lax ? n_steps + 1 : n_steps; }
  int slot(int j) const { return j - first_index(); }
  /// Times of the exposed indices: s_0..s_N for Lax, s_1..s_N for Hopf.
  std::vector<double> nodes() const;
};

/// Builds the grid for `scheme` with N = round(t_final / delta).
///
/// Throws ConfigError when t_final or delta is not positive, or when
/// t_final / delta is not an integer up to a relative tolerance of 1e-6.
TimeGrid make_time_grid(double t_final, double delta, Scheme scheme);

}  // namespace hjsplit
