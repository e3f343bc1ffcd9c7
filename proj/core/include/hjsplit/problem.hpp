#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hjsplit/types.hpp"

namespace hjsplit {

/// The iterate values at one time slot, as seen by an optimal-control block update.
struct OcPoint {
  const Vec& x;
  const Vec& p;
};

/// The iterate values at one time slot for a game. `q` is the algorithm's
/// q variable; Hamiltonians receive -q in their q_neg argument.
struct GamePoint {
  const Vec& x;
  const Vec& y;
  const Vec& p;
  const Vec& q;
};

/// How one block of a bundle is updated at a single time slot.
///
/// Each block minimizes F(u) + |u - anchor|^2 / (2 * step) where F is
/// the block's share of the saddle objective divided by delta and `lambda`
/// = step * delta. A gradient step linearizes F at the current value;
/// a closed-form prox evaluates prox_{lambda F}(anchor); prox-gradient
/// takes a gradient step on `smooth_grad` and feeds it to `prox`.
template <class Point>
struct ProxRule {
  enum class Kind { gradient_step, closed_form_prox, prox_gradient };

  Kind kind = Kind::gradient_step;
  std::function<Vec(const Point& at, const Vec& anchor, double s, double lambda)> prox;
  std::function<Vec(const Point& at, double s)> smooth_grad;
};

using OcRule = ProxRule<OcPoint>;
using GameRule = ProxRule<GamePoint>;

/// Closed-form machinery for the convex conjugate g* of the initial data.
struct Conjugate {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  /// prox_{lambda g*}(v)
  std::function<Vec(const Vec& v, double lambda)> prox;
};

struct InitialData {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  /// prox_{lambda g}(v); a gradient step on g is used when absent.
  std::function<Vec(const Vec& v, double lambda)> prox;
  std::optional<Conjugate> conjugate;
};

struct ControlProblem {
  std::string name;
  int dim = 0;
  std::function<double(const Vec& x, const Vec& p, double s)> hamiltonian;
  std::function<Vec(const Vec& x, const Vec& p, double s)> grad_x_hamiltonian;
  std::function<Vec(const Vec& x, const Vec& p, double s)> grad_p_hamiltonian;
  /// p-block: F(p) = H(x, p, s).
  OcRule p_update;
  /// x-block: F(x) = -H(x, p, s).
  OcRule x_update;
  InitialData initial_data;
  /// When set, solves run on this problem and report phi = -phi_reduced,
  /// with the costate negated (for H(x,-p,s) = H(x,p,s) and data -g).
  std::shared_ptr<const ControlProblem> reduced;
  /// Optional feedback map (x_j, p_j, s_j) -> control.
  std::function<Vec(const Vec& x, const Vec& p, double s)> feedback;
};

/// Closed-form conjugates for separable data g(x, y) = e(x) + h(y) with e
/// convex and h concave.
struct SeparableConjugates {
  /// e*(p) and prox_{lambda e*}.
  std::function<double(const Vec&)> e_star;
  std::function<Vec(const Vec& v, double lambda)> prox_e_star;
  /// Concave conjugate h_*(r) = inf_y <r, y> - h(y).
  std::function<double(const Vec&)> h_lower_star;
  /// prox of q -> -h_*(-q), i.e. argmin_q -lambda h_*(-q) + |q - v|^2 / 2.
  std::function<Vec(const Vec& v, double lambda)> prox_neg_h_lower_star;
};

struct GameInitialData {
  std::function<double(const Vec& x, const Vec& y)> value;
  std::function<Vec(const Vec& x, const Vec& y)> grad_x;
  std::function<Vec(const Vec& x, const Vec& y)> grad_y;
  /// argmin_x lambda g(x, y) + |x - v|^2 / 2; gradient step when absent.
  std::function<Vec(const Vec& y, const Vec& v, double lambda)> prox_x;
  /// argmin_y -lambda g(x, y) + |y - v|^2 / 2; gradient step when absent.
  std::function<Vec(const Vec& x, const Vec& v, double lambda)> prox_y_neg;
  std::optional<SeparableConjugates> separable;
};

struct GameProblem {
  using Hamiltonian =
      std::function<double(const Vec& x, const Vec& y, const Vec& p, const Vec& q_neg, double s)>;
  using Gradient =
      std::function<Vec(const Vec& x, const Vec& y, const Vec& p, const Vec& q_neg, double s)>;

  std::string name;
  int dim_x = 0;
  int dim_y = 0;
  Hamiltonian hamiltonian;
  Gradient grad_x, grad_y, grad_p, grad_q_neg;
  /// p-block: F(p) = H(x, y, p, -q).
  GameRule p_update;
  /// q-block: F(q) = -H(x, y, p, -q).
  GameRule q_update;
  /// x-block: F(x) = -H(x, y, p, -q).
  GameRule x_update;
  /// y-block: F(y) = +H(x, y, p, -q).
  GameRule y_update;
  GameInitialData initial_data;
};

}  // namespace hjsplit
