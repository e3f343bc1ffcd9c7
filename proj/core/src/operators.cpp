#include "hjsplit/operators.hpp"

#include <cmath>

#include <fmt/format.h>

namespace hjsplit {

Vec shrink1(const Vec& v, double lambda) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > lambda) out(i) = v(i) - lambda;
    else if (v(i) < -lambda) out(i) = v(i) + lambda;
    else out(i) = 0.0;
  }
  return out;
}

Vec shrink2(const Vec& v, double lambda) {
  const double n = v.norm();
  if (n <= lambda || n == 0.0) return Vec::Zero(v.size());
  return v * ((n - lambda) / n);
}

DiagQuadratic::DiagQuadratic(double offset_, Vec a) : offset(offset_), diag(std::move(a)) {
  if (diag.size() == 0) throw ConfigError("DiagQuadratic needs at least one entry");
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (!(diag(i) > 0.0))
      throw ConfigError(fmt::format("DiagQuadratic entry a_{} = {} must be positive", i, diag(i)));
}

double DiagQuadratic::value(const Vec& x) const {
  return offset + 0.5 * (x.array().square() / diag.array()).sum();
}

Vec DiagQuadratic::grad(const Vec& x) const { return (x.array() / diag.array()).matrix(); }

Vec DiagQuadratic::prox(const Vec& v, double lambda) const {
  return (v.array() / (1.0 + lambda / diag.array())).matrix();
}

DiagQuadratic ellipse_quadratic(int dim) {
  if (dim < 1) throw DimensionError("ellipse_quadratic needs dim >= 1");
  Vec a = Vec::Constant(dim, 0.25);
  a(0) = 6.25;
  if (dim > 1) a(1) = 1.0;
  return DiagQuadratic(-0.5, a);
}

Vec stretch_quadratic(const Vec& v, double tau, const DiagQuadratic& g) {
  if (v.size() != g.dim())
    throw DimensionError(fmt::format("stretch: vector has size {}, data has {}", v.size(), g.dim()));
  const double a_min = g.diag.minCoeff();
  if (!(tau < a_min - 1e-12))
    throw ConfigError(fmt::format(
        "stretch operator needs tau < min a_i (tau = {}, min a_i = {}); the concave prox is unbounded",
        tau, a_min));
  return (v.array() / (1.0 - tau / g.diag.array())).matrix();
}

Conjugate diag_quad_conjugate(const DiagQuadratic& g) {
  Conjugate c;
  c.value = [g](const Vec& p) { return -g.offset + 0.5 * (g.diag.array() * p.array().square()).sum(); };
  c.grad = [g](const Vec& p) -> Vec { return (g.diag.array() * p.array()).matrix(); };
  c.prox = [g](const Vec& v, double lambda) -> Vec {
    return (v.array() / (1.0 + lambda * g.diag.array())).matrix();
  };
  return c;
}

InitialData quadratic_initial_data(const DiagQuadratic& g) {
  InitialData d;
  d.value = [g](const Vec& x) { return g.value(x); };
  d.grad = [g](const Vec& x) { return g.grad(x); };
  d.prox = [g](const Vec& v, double lambda) { return g.prox(v, lambda); };
  d.conjugate = diag_quad_conjugate(g);
  return d;
}

InitialData negated_quadratic_initial_data(const DiagQuadratic& g) {
  InitialData d;
  d.value = [g](const Vec& x) { return -g.value(x); };
  d.grad = [g](const Vec& x) -> Vec { return -g.grad(x); };
  d.prox = [g](const Vec& v, double lambda) { return stretch_quadratic(v, lambda, g); };
  return d;
}

namespace {

void need_columns(const Mat& m, int min_cols, const char* what) {
  if (m.cols() < min_cols)
    throw DimensionError(fmt::format("{} needs at least {} time slots, got {}", what, min_cols, m.cols()));
}

}  // namespace

Mat apply_D_lax(const Mat& x) {
  need_columns(x, 2, "Lax D");
  const Eigen::Index n = x.cols() - 1;
  Mat out(x.rows(), x.cols());
  out.col(0).setZero();
  out.rightCols(n) = x.rightCols(n) - x.leftCols(n);
  return out;
}

Mat apply_Dt_lax(const Mat& p) {
  need_columns(p, 2, "Lax D^T");
  const Eigen::Index n = p.cols() - 1;
  Mat out(p.rows(), p.cols());
  out.col(0) = -p.col(1);
  if (n > 1) out.middleCols(1, n - 1) = p.middleCols(1, n - 1) - p.middleCols(2, n - 1);
  out.col(n) = p.col(n);
  return out;
}

Mat apply_D_hopf(const Mat& p) {
  need_columns(p, 1, "Hopf D");
  const Eigen::Index n = p.cols();
  Mat out(p.rows(), n);
  if (n > 1) out.leftCols(n - 1) = p.leftCols(n - 1) - p.rightCols(n - 1);
  out.col(n - 1) = p.col(n - 1);
  return out;
}

Mat apply_Dt_hopf(const Mat& x) {
  need_columns(x, 1, "Hopf D^T");
  const Eigen::Index n = x.cols();
  Mat out(x.rows(), n);
  out.col(0) = x.col(0);
  if (n > 1) out.rightCols(n - 1) = x.rightCols(n - 1) - x.leftCols(n - 1);
  return out;
}

double estimate_D_norm(int n_steps, int dim, int max_iterations, double tolerance) {
  if (n_steps < 1) throw ConfigError("estimate_D_norm needs N >= 1");
  if (dim < 1) throw DimensionError("estimate_D_norm needs dim >= 1");
  // Free primal slots 0..N-1; image slots 1..N with x_N pinned to zero:
  // (Dx)_j = x_j - x_{j-1} for j < N and (Dx)_N = -x_{N-1}.
  const int n = n_steps;
  auto apply = [n](const Mat& x) {
    Mat y(x.rows(), n);
    for (int j = 1; j <= n; ++j) y.col(j - 1) = (j < n ? Vec(x.col(j)) : Vec(Vec::Zero(x.rows()))) - x.col(j - 1);
    return y;
  };
  auto apply_t = [n](const Mat& y) {
    Mat x(y.rows(), n);
    for (int i = 0; i < n; ++i) x.col(i) = -y.col(i) + (i >= 1 ? Vec(y.col(i - 1)) : Vec(Vec::Zero(y.rows())));
    return x;
  };
  Mat v(dim, n);
  for (int i = 0; i < n; ++i) v.col(i).setConstant(i % 2 == 0 ? 1.0 : -1.0);
  v /= v.norm();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Mat w = apply_t(apply(v));
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    const double next = std::sqrt(norm_w);
    v = w / norm_w;
    if (std::abs(next - estimate) < tolerance) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  // Rayleigh quotient on the final vector.
  return std::max(estimate, apply(v).norm());
}

}  // namespace hjsplit
