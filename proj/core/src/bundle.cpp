#include "hjsplit/bundle.hpp"

#include <random>

#include <fmt/format.h>

namespace hjsplit {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::tol: return "tol";
    case StopReason::value_tol: return "value_tol";
    case StopReason::max_count: return "max_count";
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// mt19937_64 output is fixed by the standard; the mapping to [-r, r] is done
// by hand so the stream is identical on every platform.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double radius) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return radius * (2.0 * u - 1.0);
  }

 private:
  std::mt19937_64 engine_;
};

// Columns [first_free, last_free] are drawn around `center`; others stay as given.
void fill(Mat& block, int first_free, int last_free, const Vec& center, double radius, Uniform& rng) {
  for (int c = first_free; c <= last_free; ++c)
    for (int i = 0; i < block.rows(); ++i) block(i, c) = center(i) + rng(radius);
}

void check_target(int dim, const Vec& target, const char* which) {
  if (target.size() != dim)
    throw DimensionError(
        fmt::format("{} has dimension {}, problem expects {}", which, target.size(), dim));
}

}  // namespace

TrajectoryBundle random_init(int dim, const Vec& target, const PdhgConfig& cfg,
                             const TimeGrid& grid) {
  check_target(dim, target, "target");
  Uniform rng(cfg.seed);
  TrajectoryBundle b;
  b.scheme = grid.scheme;
  const int slots = grid.slot_count();
  b.x = Mat::Zero(dim, slots);
  b.p = Mat::Zero(dim, slots);
  const Vec zero = Vec::Zero(dim);
  fill(b.x, 0, slots - 2, target, cfg.init_radius, rng);
  b.x.col(slots - 1) = target;
  // Lax slot 0 holds p_0, which is never updated.
  fill(b.p, grid.scheme == Scheme::lax ? 1 : 0, slots - 1, zero, cfg.init_radius, rng);
  b.z = b.x;
  return b;
}

TrajectoryBundle random_init_game(int dim_x, int dim_y, const Vec& target_x, const Vec& target_y,
                                  const PdhgConfig& cfg, const TimeGrid& grid) {
  check_target(dim_x, target_x, "target_x");
  check_target(dim_y, target_y, "target_y");
  Uniform rng(cfg.seed);
  TrajectoryBundle b;
  b.scheme = grid.scheme;
  const int slots = grid.slot_count();
  const int p_first = grid.scheme == Scheme::lax ? 1 : 0;
  b.x = Mat::Zero(dim_x, slots);
  b.y = Mat::Zero(dim_y, slots);
  b.p = Mat::Zero(dim_x, slots);
  b.q = Mat::Zero(dim_y, slots);
  fill(b.x, 0, slots - 2, target_x, cfg.init_radius, rng);
  b.x.col(slots - 1) = target_x;
  fill(b.y, 0, slots - 2, target_y, cfg.init_radius, rng);
  b.y.col(slots - 1) = target_y;
  fill(b.p, p_first, slots - 1, Vec::Zero(dim_x), cfg.init_radius, rng);
  fill(b.q, p_first, slots - 1, Vec::Zero(dim_y), cfg.init_radius, rng);
  b.z = b.x;
  b.w = b.y;
  return b;
}

}  // namespace hjsplit
