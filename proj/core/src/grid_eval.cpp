#include "hjsplit/grid_eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "hjsplit/pdhg_dg.hpp"
#include "hjsplit/pdhg_oc.hpp"

namespace hjsplit {

std::vector<double> uniform_nodes(double lo, double hi, double mesh) {
  if (!(mesh > 0.0)) throw ConfigError(fmt::format("mesh must be positive, got {}", mesh));
  if (!(hi >= lo)) throw ConfigError(fmt::format("empty range [{}, {}]", lo, hi));
  const int count = static_cast<int>(std::floor((hi - lo) / mesh + 1e-9)) + 1;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + i * mesh;
  return out;
}

void SliceGrid::validate(int dim) const {
  if (base.size() != dim)
    throw DimensionError(fmt::format("slice base has dimension {}, problem has {}", base.size(), dim));
  if (axis_a < 0 || axis_a >= dim || axis_b < 0 || axis_b >= dim)
    throw DimensionError(fmt::format("slice axes ({}, {}) out of range for dimension {}", axis_a, axis_b, dim));
  if (axis_a == axis_b) throw ConfigError("slice axes must differ");
  if (!(mesh > 0.0)) throw ConfigError("slice mesh must be positive");
  if (!(a_max >= a_min) || !(b_max >= b_min)) throw ConfigError("slice ranges must be non-empty");
}

Vec SliceGrid::point(double a, double b) const {
  Vec x = base;
  x(axis_a) = a;
  x(axis_b) = b;
  return x;
}

SolveReport solve_point(const AnyProblem& problem, SolverKind kind, const Vec& point, double t,
                        const PdhgConfig& cfg) {
  if (const auto* oc = std::get_if<ControlProblem>(&problem)) {
    if (kind == SolverKind::lax_oc) return solve_lax_oc(*oc, point, t, cfg);
    if (kind == SolverKind::hopf_oc) return solve_hopf_oc(*oc, point, t, cfg);
    throw ConfigError(fmt::format("solver {} needs a game problem", to_string(kind)));
  }
  const auto& dg = std::get<GameProblem>(problem);
  if (point.size() != dg.dim_x + dg.dim_y)
    throw DimensionError(fmt::format("point has dimension {}, game '{}' expects {}", point.size(),
                                     dg.name, dg.dim_x + dg.dim_y));
  const Vec x = point.head(dg.dim_x), y = point.tail(dg.dim_y);
  if (kind == SolverKind::lax_dg) return solve_lax_dg(dg, x, y, t, cfg);
  if (kind == SolverKind::hopf_dg) return solve_hopf_dg(dg, x, y, t, cfg);
  throw ConfigError(fmt::format("solver {} needs an optimal-control problem", to_string(kind)));
}

std::uint64_t point_seed(std::uint64_t base_seed, int i, int j, int k) {
  std::uint64_t s = mix_seed(base_seed, static_cast<std::uint64_t>(k));
  s = mix_seed(s, static_cast<std::uint64_t>(i));
  return mix_seed(s, static_cast<std::uint64_t>(j));
}

double SliceResult::converged_fraction(std::size_t k) const {
  const auto& o = outcomes.at(k);
  if (o.empty()) return 0.0;
  const auto n = std::count_if(o.begin(), o.end(), [](const PointOutcome& p) { return p.converged; });
  return static_cast<double>(n) / static_cast<double>(o.size());
}

double SliceResult::accepted_fraction(std::size_t k) const {
  const auto& o = outcomes.at(k);
  if (o.empty()) return 0.0;
  const auto n = std::count_if(o.begin(), o.end(), [](const PointOutcome& p) { return p.accepted; });
  return static_cast<double>(n) / static_cast<double>(o.size());
}

SliceResult eval_slice(const RegisteredProblem& problem, SolverKind kind, const SliceGrid& slice,
                       const std::vector<double>& times, const SliceOptions& options) {
  slice.validate(stacked_dim(problem.problem));
  const std::vector<double> a = slice.a_nodes(), b = slice.b_nodes();
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  const int nt = static_cast<int>(times.size());

  SliceResult result;
  result.fields.resize(times.size());
  result.outcomes.assign(times.size(), std::vector<PointOutcome>(static_cast<std::size_t>(na * nb)));
  for (int k = 0; k < nt; ++k) {
    auto& f = result.fields[static_cast<std::size_t>(k)];
    f.t = times[static_cast<std::size_t>(k)];
    f.a_nodes = a;
    f.b_nodes = b;
    f.values = Mat::Zero(na, nb);
  }

  const long total = static_cast<long>(nt) * na * nb;
  std::atomic<long> next{0};
  std::vector<double> seconds(static_cast<std::size_t>(total), 0.0);

  auto worker = [&] {
    for (;;) {
      const long task = next.fetch_add(1);
      if (task >= total) return;
      const int k = static_cast<int>(task / (static_cast<long>(na) * nb));
      const int rest = static_cast<int>(task % (static_cast<long>(na) * nb));
      const int i = rest / nb, j = rest % nb;
      const double t = times[static_cast<std::size_t>(k)];
      const Vec point = slice.point(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
      PdhgConfig cfg = options.overrides.apply(problem.default_config(point, t));
      cfg.seed = point_seed(options.base_seed, i, j, k);

      PointOutcome& out = result.outcomes[static_cast<std::size_t>(k)][static_cast<std::size_t>(rest)];
      const auto start = std::chrono::steady_clock::now();
      try {
        const SolveReport r = solve_point(problem.problem, kind, point, t, cfg);
        out.value = r.fval;
        out.iterations = r.iterations;
        out.converged = r.converged;
        out.accepted = r.accepted(cfg);
        out.stop_reason = r.stop_reason;
      } catch (const DivergenceError& e) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.iterations = static_cast<int>(e.iteration());
        out.error = e.what();
      }
      seconds[static_cast<std::size_t>(task)] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.fields[static_cast<std::size_t>(k)].values(i, j) = out.value;
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int k = 0; k < nt; ++k)
    for (int r = 0; r < na * nb; ++r)
      if (!result.outcomes[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)].error.empty())
        result.failed_nodes.push_back(fmt::format("{}:{}:{}", k, r / nb, r % nb));
  double sum = 0.0;
  for (double s : seconds) sum += s;
  result.mean_seconds_per_point = total > 0 ? sum / static_cast<double>(total) : 0.0;
  return result;
}

std::vector<Segment> extract_zero_level(const Field2D& field, double level) {
  std::vector<Segment> out;
  const Mat& v = field.values;
  const auto na = v.rows(), nb = v.cols();
  if (static_cast<std::size_t>(na) != field.a_nodes.size() ||
      static_cast<std::size_t>(nb) != field.b_nodes.size())
    throw DimensionError("field values do not match its node vectors");

  struct P {
    double x, y;
  };
  for (Eigen::Index i = 0; i + 1 < na; ++i) {
    for (Eigen::Index j = 0; j + 1 < nb; ++j) {
      // Corners counter-clockwise: 00, 10, 11, 01.
      const double xs[4] = {field.a_nodes[i], field.a_nodes[i + 1], field.a_nodes[i + 1], field.a_nodes[i]};
      const double ys[4] = {field.b_nodes[j], field.b_nodes[j], field.b_nodes[j + 1], field.b_nodes[j + 1]};
      const double vs[4] = {v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      if (!std::isfinite(vs[0]) || !std::isfinite(vs[1]) || !std::isfinite(vs[2]) || !std::isfinite(vs[3]))
        continue;
      bool in[4];
      int inside = 0;
      for (int c = 0; c < 4; ++c) {
        in[c] = vs[c] >= level;
        inside += in[c];
      }
      if (inside == 0 || inside == 4) continue;

      // Edge e joins corner e and corner e+1.
      auto cross = [&](int e) {
        const int c0 = e, c1 = (e + 1) % 4;
        const double s = (level - vs[c0]) / (vs[c1] - vs[c0]);
        return P{xs[c0] + s * (xs[c1] - xs[c0]), ys[c0] + s * (ys[c1] - ys[c0])};
      };
      auto emit = [&](int e0, int e1) {
        const P p = cross(e0), q = cross(e1);
        out.push_back({p.x, p.y, q.x, q.y});
      };

      const bool saddle = inside == 2 && in[0] == in[2];
      if (!saddle) {
        int edges[2], n = 0;
        for (int e = 0; e < 4; ++e)
          if (in[e] != in[(e + 1) % 4]) edges[n++] = e;
        emit(edges[0], edges[1]);
        continue;
      }
      // Cut off the corners whose class differs from the cell center.
      const bool center_in = 0.25 * (vs[0] + vs[1] + vs[2] + vs[3]) >= level;
      for (int c = 0; c < 4; ++c)
        if (in[c] != center_in) emit((c + 3) % 4, c);
    }
  }
  return out;
}

namespace {

double point_segment_distance(double px, double py, const Segment& s) {
  const double dx = s.bx - s.ax, dy = s.by - s.ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - s.ax) * dx + (py - s.ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (s.ax + t * dx), py - (s.ay + t * dy));
}

double directed(const std::vector<Segment>& from, const std::vector<Segment>& to) {
  double worst = 0.0;
  auto nearest = [&](double x, double y) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : to) best = std::min(best, point_segment_distance(x, y, s));
    return best;
  };
  for (const auto& s : from) worst = std::max({worst, nearest(s.ax, s.ay), nearest(s.bx, s.by)});
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Segment>& a, const std::vector<Segment>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

ScalingFit fit_scaling(const std::vector<ScalingRow>& rows) {
  ScalingFit fit;
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 2) return fit;
  Vec d(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = rows[static_cast<std::size_t>(i)].dim;
    y(i) = rows[static_cast<std::size_t>(i)].median_seconds;
  }
  if (d.maxCoeff() == d.minCoeff()) return fit;

  Mat lin(n, 2);
  lin.col(0) = d;
  lin.col(1).setOnes();
  const Vec cl = lin.colPivHouseholderQr().solve(y);
  fit.linear_a = cl(0);
  fit.linear_b = cl(1);
  const double ss_res = (lin * cl - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  fit.r2_linear = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);

  if (n >= 3) {
    Mat quad(n, 3);
    quad.col(0) = d.array().square().matrix();
    quad.col(1) = d;
    quad.col(2).setOnes();
    const Vec cq = quad.colPivHouseholderQr().solve(y);
    fit.quad_a = cq(0);
    fit.quad_b = cq(1);
    fit.quad_c = cq(2);
  } else {
    fit.quad_b = fit.linear_a;
    fit.quad_c = fit.linear_b;
  }
  fit.degenerate = false;
  return fit;
}

ScalingResult scaling_run(const std::function<RegisteredProblem(int)>& family,
                          const std::vector<int>& dims, const std::function<Vec(int)>& point_rule,
                          double t, const ConfigOverrides& overrides, int repeats) {
  if (repeats < 1) throw ConfigError("scaling_run needs repeats >= 1");
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] <= dims[i - 1]) throw ConfigError("scaling dims must be strictly ascending");
  ScalingResult result;
  for (int dim : dims) {
    const RegisteredProblem problem = family(dim);
    const Vec point = point_rule(dim);
    const PdhgConfig cfg = overrides.apply(problem.default_config(point, t));
    SolveReport warm = solve_point(problem.problem, problem.default_solver, point, t, cfg);
    std::vector<double> samples;
    // Each repeat starts from its own random guess, so the median also
    // averages over the iteration count.
    long long iterations = 0;
    for (int r = 0; r < repeats; ++r) {
      PdhgConfig rc = cfg;
      rc.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
      const auto start = std::chrono::steady_clock::now();
      warm = solve_point(problem.problem, problem.default_solver, point, t, rc);
      samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      iterations += warm.iterations;
    }
    ScalingRow row;
    row.dim = dim;
    row.iterations = static_cast<int>(iterations / repeats);
    double sum = 0.0;
    for (double s : samples) sum += s;
    row.mean_seconds = sum / static_cast<double>(samples.size());
    std::sort(samples.begin(), samples.end());
    const std::size_t m = samples.size();
    row.median_seconds = m % 2 == 1 ? samples[m / 2] : 0.5 * (samples[m / 2 - 1] + samples[m / 2]);
    result.rows.push_back(row);
  }
  result.fit = fit_scaling(result.rows);
  return result;
}

}  // namespace hjsplit
