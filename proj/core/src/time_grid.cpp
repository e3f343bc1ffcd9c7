#include "hjsplit/time_grid.hpp"

#include <cmath>

#include <fmt/format.h>

namespace hjsplit {

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int j = first_index(); j <= n_steps; ++j) out.push_back(node(j));
  return out;
}

TimeGrid make_time_grid(double t_final, double delta, Scheme scheme) {
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw ConfigError(fmt::format("t_final must be positive and finite, got {}", t_final));
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ConfigError(fmt::format("delta must be positive and finite, got {}", delta));
  const double ratio = t_final / delta;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-6 * std::max(1.0, n))
    throw ConfigError(
        fmt::format("t_final / delta = {:.17g} is not a positive integer; pick delta dividing t", ratio));
  TimeGrid grid;
  grid.t_final = t_final;
  grid.n_steps = static_cast<int>(n);
  grid.delta = t_final / n;
  grid.scheme = scheme;
  return grid;
}

}  // namespace hjsplit
