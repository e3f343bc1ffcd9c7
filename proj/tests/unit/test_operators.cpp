#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hjsplit/operators.hpp"
#include "support.hpp"

using namespace hjsplit;
namespace ht = hjsplit::testing;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Mat row(std::initializer_list<double> v) { return vec(v).transpose(); }

}  // namespace

TEST(Shrink1, Branches) {
  EXPECT_DOUBLE_EQ(shrink1(vec({2.0}), 0.5)(0), 1.5);
  EXPECT_DOUBLE_EQ(shrink1(vec({0.3}), 0.5)(0), 0.0);
  const Vec m = shrink1(vec({-2.0, 0.1}), 0.5);
  EXPECT_DOUBLE_EQ(m(0), -1.5);
  EXPECT_DOUBLE_EQ(m(1), 0.0);
}

TEST(Shrink2, Examples) {
  EXPECT_EQ(shrink2(vec({0.0, 0.0}), 1.0), vec({0.0, 0.0}));
  EXPECT_EQ(shrink2(vec({0.3, 0.4}), 1.0), vec({0.0, 0.0}));
  const Vec s = shrink2(vec({3.0, 4.0}), 1.0);
  EXPECT_NEAR(s(0), 2.4, 1e-15);
  EXPECT_NEAR(s(1), 3.2, 1e-15);
}

TEST(Shrink2, MatchesBruteForce) {
  const Eigen::Vector2d v(3.0, 4.0);
  const auto x = ht::argmin_2d(
      [&](double a, double b) {
        return std::hypot(a, b) + 0.5 * ((a - v(0)) * (a - v(0)) + (b - v(1)) * (b - v(1))) / 1.0;
      },
      {-5, -5}, {5, 5}, 401);
  EXPECT_NEAR(x(0), 2.4, 1e-6);
  EXPECT_NEAR(x(1), 3.2, 1e-6);
}

TEST(Shrink, FirmlyNonexpansive) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const Vec u = ht::uniform_vec(rng, 3, -3, 3), v = ht::uniform_vec(rng, 3, -3, 3);
    const double l = lam(rng);
    const Vec a1 = shrink1(u, l), b1 = shrink1(v, l), a2 = shrink2(u, l), b2 = shrink2(v, l);
    EXPECT_LE((a1 - b1).norm(), (u - v).norm() + 1e-14);
    EXPECT_LE((a2 - b2).norm(), (u - v).norm() + 1e-14);
    // Firm nonexpansiveness: |Pu - Pv|^2 <= <Pu - Pv, u - v>.
    EXPECT_LE((a2 - b2).squaredNorm(), (a2 - b2).dot(u - v) + 1e-12);
    EXPECT_LE((a1 - b1).squaredNorm(), (a1 - b1).dot(u - v) + 1e-12);
  }
}

TEST(Shrink2, RotationEquivariant) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Mat q = Eigen::HouseholderQR<Mat>(Mat::Random(4, 4)).householderQ();
    const Vec v = ht::uniform_vec(rng, 4, -2, 2);
    EXPECT_LE((shrink2(q * v, 0.7) - q * shrink2(v, 0.7)).norm(), 1e-12);
  }
}

TEST(ProxOptimality, RandomPerturbations) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  const DiagQuadratic g(-0.5, vec({6.25, 1.0, 0.25}));
  const Conjugate gs = diag_quad_conjugate(g);
  auto check = [&](auto F, const Vec& v, const Vec& y, double lambda) {
    const double base = F(y) + (y - v).squaredNorm() / (2.0 * lambda);
    for (int k = 0; k < 1000; ++k) {
      Vec eps(y.size());
      for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = noise(rng);
      eps *= std::pow(10.0, -1.0 - 4.0 * (k % 5) / 4.0);
      const Vec yp = y + eps;
      EXPECT_LE(base, F(yp) + (yp - v).squaredNorm() / (2.0 * lambda) + 1e-12);
    }
  };
  for (int trial = 0; trial < 5; ++trial) {
    const Vec v = ht::uniform_vec(rng, 3, -3, 3);
    check([](const Vec& x) { return x.lpNorm<1>(); }, v, shrink1(v, 0.4), 0.4);
    check([](const Vec& x) { return x.norm(); }, v, shrink2(v, 0.4), 0.4);
    check([&](const Vec& x) { return g.value(x); }, v, g.prox(v, 0.4), 0.4);
    check([&](const Vec& x) { return gs.value(x); }, v, gs.prox(v, 0.4), 0.4);
    check([&](const Vec& x) { return -g.value(x); }, v, stretch_quadratic(v, 0.2, g), 0.2);
  }
}

TEST(Stretch, Examples) {
  const DiagQuadratic one(0.0, vec({1.0}));
  EXPECT_EQ(stretch_quadratic(vec({0.0}), 0.5, one)(0), 0.0);
  EXPECT_DOUBLE_EQ(stretch_quadratic(vec({1.0}), 0.5, one)(0), 2.0);
  const double x = ht::argmin_1d([](double u) { return -0.5 * u * u + (u - 1.0) * (u - 1.0) / (2 * 0.5); }, -10, 10);
  EXPECT_NEAR(x, 2.0, 1e-6);
  EXPECT_THROW(stretch_quadratic(vec({1.0}), 1.0, one), ConfigError);
  EXPECT_THROW(stretch_quadratic(vec({1.0}), 1.5, one), ConfigError);
  const DiagQuadratic e = ellipse_quadratic(3);
  EXPECT_THROW(stretch_quadratic(vec({1.0, 1.0, 1.0}), 0.25, e), ConfigError);
}

TEST(Conjugate, Examples) {
  const DiagQuadratic g(-0.5, vec({1.0}));
  const Conjugate gs = diag_quad_conjugate(g);
  // Legendre transform by brute force: sup_x p x - g(x) at p = 0.
  const double x0 = ht::argmin_1d([&](double x) { return g.value(vec({x})); }, -5, 5);
  EXPECT_NEAR(-g.value(vec({x0})), 0.5, 1e-10);
  EXPECT_DOUBLE_EQ(gs.value(vec({0.0})), 0.5);
  EXPECT_EQ(gs.prox(vec({0.0}), 3.0)(0), 0.0);
  EXPECT_DOUBLE_EQ(gs.prox(vec({2.0}), 1.0)(0), 1.0);
}

TEST(Conjugate, FenchelYoung) {
  std::mt19937_64 rng(17);
  const DiagQuadratic g = ellipse_quadratic(4);
  const Conjugate gs = diag_quad_conjugate(g);
  for (int k = 0; k < 100; ++k) {
    const Vec x = ht::uniform_vec(rng, 4, -3, 3), p = ht::uniform_vec(rng, 4, -3, 3);
    EXPECT_GE(g.value(x) + gs.value(p), x.dot(p) - 1e-12);
    const Vec q = g.grad(x);
    EXPECT_NEAR(g.value(x) + gs.value(q), x.dot(q), 1e-8);
    EXPECT_LE((gs.grad(q) - x).norm(), 1e-12);
  }
}

TEST(DiagQuadratic, RejectsNonPositive) {
  EXPECT_THROW(DiagQuadratic(0.0, vec({1.0, 0.0})), ConfigError);
  EXPECT_THROW(DiagQuadratic(0.0, vec({-1.0})), ConfigError);
  const DiagQuadratic e = ellipse_quadratic(4);
  EXPECT_EQ(e.diag, vec({6.25, 1.0, 0.25, 0.25}));
  EXPECT_EQ(e.value(Vec::Zero(4)), -0.5);
}

TEST(DLax, Examples) {
  EXPECT_EQ(apply_D_lax(row({1, 3, 6})), row({0, 2, 3}));
  EXPECT_EQ(apply_Dt_lax(row({0, 1, 1})), row({-1, 0, 1}));
}

TEST(DHopf, Examples) {
  EXPECT_EQ(apply_D_hopf(row({1, 1})), row({0, 1}));
  EXPECT_EQ(apply_D_hopf(row({0.7})), row({0.7}));
  EXPECT_EQ(apply_Dt_hopf(row({0.7})), row({0.7}));
}

TEST(DOperators, AdjointIdentity) {
  std::mt19937_64 rng(23);
  for (int n : {1, 2, 5, 19}) {
    const Mat x = Mat::Random(3, n + 1), p = Mat::Random(3, n + 1);
    Mat p0 = p;
    p0.col(0).setZero();
    EXPECT_NEAR((p0.cwiseProduct(apply_D_lax(x))).sum(), (apply_Dt_lax(p0).cwiseProduct(x)).sum(), 1e-12);
    const Mat xh = Mat::Random(3, n), ph = Mat::Random(3, n);
    EXPECT_NEAR((apply_D_hopf(ph).cwiseProduct(xh)).sum(), (ph.cwiseProduct(apply_Dt_hopf(xh))).sum(), 1e-12);
  }
}

TEST(DOperators, MatchDenseMatrices) {
  for (int n = 1; n <= 8; ++n) {
    const Mat x = Mat::Random(2, n + 1);
    const Mat dl = ht::dense_lax_D(n);
    EXPECT_LE((apply_D_lax(x) - x * dl.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    Mat p = Mat::Random(2, n + 1);
    p.col(0).setZero();
    EXPECT_LE((apply_Dt_lax(p) - p * dl).cwiseAbs().maxCoeff(), 1e-14);
    const Mat dh = ht::dense_hopf_D(n);
    const Mat ph = Mat::Random(2, n), xh = Mat::Random(2, n);
    EXPECT_LE((apply_D_hopf(ph) - ph * dh.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((apply_Dt_hopf(xh) - xh * dh).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(DOperators, ShapeErrors) {
  EXPECT_THROW(apply_D_lax(Mat(2, 1)), DimensionError);
  EXPECT_THROW(apply_D_hopf(Mat(2, 0)), DimensionError);
}

TEST(DNorm, Examples) {
  EXPECT_DOUBLE_EQ(estimate_D_norm(1), 1.0);
  const double n50 = estimate_D_norm(50);
  EXPECT_GE(n50, 1.9);
  EXPECT_LT(n50, 2.0);
  EXPECT_THROW(estimate_D_norm(0), ConfigError);
}

TEST(DNorm, MatchesDenseSvdAndMonotone) {
  double previous = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double svd = Eigen::JacobiSVD<Mat>(ht::dense_free_D(n)).singularValues()(0);
    const double est = estimate_D_norm(n, 3);
    EXPECT_NEAR(est, svd, 1e-6) << "N = " << n;
    EXPECT_GE(est, previous - 1e-12);
    EXPECT_LT(est, 2.0);
    previous = est;
  }
}
