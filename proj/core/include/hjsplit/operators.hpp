#pragma once

#include "hjsplit/problem.hpp"
#include "hjsplit/types.hpp"

namespace hjsplit {

/// Componentwise soft threshold, the prox of lambda * |.|_1.
Vec shrink1(const Vec& v, double lambda);

/// Block soft threshold, the prox of lambda * |.|_2. Zero maps to zero.
Vec shrink2(const Vec& v, double lambda);

/// g(x) = offset + 1/2 <A^{-1} x, x> with A = diag(a), all a_i > 0.
struct DiagQuadratic {
  double offset = 0.0;
  Vec diag;

  DiagQuadratic() = default;
  /// Throws ConfigError unless every entry of `a` is positive.
  DiagQuadratic(double offset, Vec a);

  int dim() const { return static_cast<int>(diag.size()); }
  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  /// prox_{lambda g}(v)_i = v_i / (1 + lambda / a_i)
  Vec prox(const Vec& v, double lambda) const;
};

/// A = diag(2.5^2, 1, 0.5^2, ..., 0.5^2) with offset -1/2, in `dim` dimensions.
DiagQuadratic ellipse_quadratic(int dim);

/// prox of the concave quadratic -g: argmin_x -g(x) + |x - v|^2 / (2 tau),
/// i.e. v_i / (1 - tau / a_i). Throws ConfigError unless tau < min a_i
/// by a margin of 1e-12.
Vec stretch_quadratic(const Vec& v, double tau, const DiagQuadratic& g);

/// g*(p) = -offset + 1/2 <A p, p>, grad g* = A p, prox_{lambda g*}(v)_i = v_i / (1 + lambda a_i).
Conjugate diag_quad_conjugate(const DiagQuadratic& g);

/// g as initial data with its closed-form prox and conjugate.
InitialData quadratic_initial_data(const DiagQuadratic& g);

/// -g as initial data: prox is the stretch operator, no conjugate.
InitialData negated_quadratic_initial_data(const DiagQuadratic& g);

/// Lax difference operator on a dim x (N+1) bundle:
/// (D x)_0 = 0, (D x)_j = x_j - x_{j-1}.
Mat apply_D_lax(const Mat& x);
/// (D^T p)_0 = -p_1, (D^T p)_j = p_j - p_{j+1} for 0 < j < N, (D^T p)_N = p_N.
Mat apply_Dt_lax(const Mat& p);

/// Hopf difference operator on a dim x N bundle (slots 1..N):
/// (D p)_j = p_j - p_{j+1} for j < N, (D p)_N = p_N.
Mat apply_D_hopf(const Mat& p);
/// (D^T x)_1 = x_1, (D^T x)_j = x_j - x_{j-1}.
Mat apply_Dt_hopf(const Mat& x);

/// Largest singular value of the difference operator acting on the free
/// primal slots (x_N is pinned), estimated by power iteration on D^T D.
/// The value is the same for every block dimension; `dim` only sizes the
/// iteration vectors. Returns 1 for N = 1 and approaches 2 from below.
double estimate_D_norm(int n_steps, int dim = 1, int max_iterations = 200,
                       double tolerance = 1e-10);

}  // namespace hjsplit
