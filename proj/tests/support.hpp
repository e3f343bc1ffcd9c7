#pragma once

// Independent oracles used by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace hjsplit::testing {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

inline std::pair<double, double> golden_min(const Fn1& f, double lo, double hi, int iterations = 120) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

// Dense sample of [lo, hi] then golden-section polish around the best sample.
inline double argmin_1d(const Fn1& f, double lo, double hi, int samples = 20001) {
  const double h = (hi - lo) / (samples - 1);
  double best = lo, best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = lo + i * h;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  return golden_min(f, best - h, best + h).first;
}

// Dense 2-D grid then alternating golden polish.
inline Eigen::Vector2d argmin_2d(const Fn2& f, Eigen::Vector2d lo, Eigen::Vector2d hi, int samples = 801) {
  const Eigen::Vector2d h = (hi - lo) / (samples - 1);
  Eigen::Vector2d best = lo;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      const double x = lo(0) + i * h(0), y = lo(1) + j * h(1);
      const double v = f(x, y);
      if (v < best_f) {
        best_f = v;
        best << x, y;
      }
    }
  Eigen::Vector2d radius = h;
  for (int sweep = 0; sweep < 60; ++sweep) {
    best(0) = golden_min([&](double x) { return f(x, best(1)); }, best(0) - radius(0), best(0) + radius(0)).first;
    best(1) = golden_min([&](double y) { return f(best(0), y); }, best(1) - radius(1), best(1) + radius(1)).first;
    radius *= 0.7;
  }
  return best;
}

// Lax-block bidiagonal on free slots: columns x_0..x_{N-1}, rows (Dx)_1..(Dx)_N with x_N = 0.
inline Eigen::MatrixXd dense_free_D(int n) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j <= n; ++j) {
    if (j < n) D(j - 1, j) = 1.0;
    D(j - 1, j - 1) = -1.0;
  }
  return D;
}

// Full Lax D on scalar bundles with slots 0..N: (Dx)_0 = 0, (Dx)_j = x_j - x_{j-1}.
inline Eigen::MatrixXd dense_lax_D(int n) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int j = 1; j <= n; ++j) {
    D(j, j) = 1.0;
    D(j, j - 1) = -1.0;
  }
  return D;
}

// Hopf D on scalar bundles with slots 1..N: (Dp)_j = p_j - p_{j+1}, (Dp)_N = p_N.
inline Eigen::MatrixXd dense_hopf_D(int n) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    D(j, j) = 1.0;
    if (j + 1 < n) D(j, j + 1) = -1.0;
  }
  return D;
}

// Central finite difference of f along every coordinate.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline Eigen::VectorXd uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace hjsplit::testing
