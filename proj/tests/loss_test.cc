#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "condreg/errors.h"
#include "condreg/loss.h"
#include "test_util.h"

using namespace condreg;
using condreg::testing::random_matrix;
using condreg::testing::random_vector;

namespace {

double pointwise(const Matrix& y, const Vector& z, const Vector& w) {
  double s = 0;
  for (long i = 0; i < y.rows(); ++i) {
    double r = z(i) - y.row(i).dot(w);
    s += r * r;
  }
  return s / static_cast<double>(y.rows());
}

}  // namespace

TEST(QuadLoss, SinglePointZeroTarget) {
  Matrix y(1, 1);
  y << 1.0;
  QuadLoss L = build_quad_loss(y, Vector::Zero(1));
  Matrix want(2, 2);
  want << 0, 0, 0, 1;
  EXPECT_EQ(L.A, want);
  for (double w : {-2.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(eval(L, Vector::Constant(1, w)), w * w);
}

TEST(QuadLoss, SinglePointExactFit) {
  Matrix y(1, 1);
  y << 1.0;
  QuadLoss L = build_quad_loss(y, Vector::Constant(1, 2.0));
  EXPECT_EQ(eval(L, Vector::Constant(1, 2.0)), 0.0);
}

TEST(QuadLoss, PointwiseSumOracle) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const long d = 1 + rep % 4, pts = 1 + (rep * 7) % 50;
    Matrix y = random_matrix(pts, d, rng, -3, 3);
    Vector z = random_vector(pts, rng, -5, 5);
    QuadLoss L = build_quad_loss(y, z);
    EXPECT_TRUE(L.A.isApprox(L.A.transpose()));
    EXPECT_GE(L.a0(), 0.0);
    for (int k = 0; k < 20; ++k) {
      Vector w = random_vector(d, rng, -4, 4);
      double want = pointwise(y, z, w);
      EXPECT_NEAR(eval(L, w), want, 1e-10 * (1.0 + want));
    }
  }
}

TEST(QuadLoss, FiftyPointsAtTenToTheMinusTen) {
  std::mt19937_64 rng(2);
  Matrix y = random_matrix(50, 3, rng);
  Vector z = random_vector(50, rng);
  QuadLoss L = build_quad_loss(y, z);
  for (int k = 0; k < 20; ++k) {
    Vector w = random_vector(3, rng);
    EXPECT_NEAR(eval(L, w), pointwise(y, z, w), 1e-10);
  }
}

TEST(QuadLoss, Nonnegative) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix y = random_matrix(4, 3, rng);
    Vector z = y * random_vector(3, rng);  // exact fit exists
    QuadLoss L = build_quad_loss(y, z);
    EXPECT_GE(eval(L, condreg::testing::ols(y, z)), 0.0);
    for (int k = 0; k < 10; ++k) EXPECT_GE(eval(L, random_vector(3, rng, -10, 10)), 0.0);
  }
}

TEST(QuadLoss, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(4);
  const double h = 1e-5;
  for (int rep = 0; rep < 100; ++rep) {
    const long d = 1 + rep % 5;
    QuadLoss L = condreg::testing::random_loss(10 + rep % 7, d, rng, rep % 2 ? 0.3 : 0.0);
    Vector w = random_vector(d, rng, -3, 3);
    Vector g = gradient(L, w), fd(d);
    for (long j = 0; j < d; ++j) {
      Vector e = Vector::Zero(d);
      e(j) = h;
      fd(j) = (eval(L, w + e) - eval(L, w - e)) / (2 * h);
    }
    EXPECT_LT((g - fd).norm() / std::max(1.0, g.norm()), 1e-4);
  }
}

TEST(QuadLoss, GradientVanishesAtOls) {
  std::mt19937_64 rng(5);
  Matrix y = random_matrix(30, 3, rng);
  Vector z = random_vector(30, rng);
  QuadLoss L = build_quad_loss(y, z);
  EXPECT_LT(gradient(L, condreg::testing::ols(y, z)).norm(), 1e-8);
  EXPECT_LT((unconstrained_minimizer(L) - condreg::testing::ols(y, z)).norm(), 1e-8);
}

TEST(QuadLoss, KappaShiftsGradientByKappaW) {
  std::mt19937_64 rng(6);
  Matrix y = random_matrix(12, 2, rng);
  Vector z = random_vector(12, rng);
  QuadLoss a = build_quad_loss(y, z, 0.0), b = build_quad_loss(y, z, 0.7);
  Vector w = random_vector(2, rng);
  EXPECT_LT((gradient(b, w) - gradient(a, w) - 0.7 * w).norm(), 1e-12);
  EXPECT_NEAR(eval(b, w) - eval(a, w), 0.35 * w.squaredNorm(), 1e-12);
  EXPECT_DOUBLE_EQ(eval_raw(b, w), eval(a, w));
}

TEST(QuadLoss, StronglyConvexWithKappa) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const double kappa = 0.1 + 0.05 * rep;
    // Rank-deficient data: only the ridge makes it strongly convex.
    Matrix y = random_matrix(1, 3, rng);
    QuadLoss L = build_quad_loss(y, random_vector(1, rng), kappa);
    Vector w = random_vector(3, rng, -5, 5), v = random_vector(3, rng, -5, 5);
    double slack = eval(L, v) - eval(L, w) - gradient(L, w).dot(v - w) -
                   0.5 * kappa * (v - w).squaredNorm();
    EXPECT_GE(slack, -1e-9);
  }
}

TEST(QuadLoss, WeightedTotal) {
  std::mt19937_64 rng(8);
  std::vector<Matrix> ys;
  std::vector<Vector> zs, ws;
  std::vector<QuadLoss> losses;
  for (int j = 0; j < 4; ++j) {
    ys.push_back(random_matrix(3 + j, 2, rng));
    zs.push_back(random_vector(3 + j, rng));
    ws.push_back(random_vector(2, rng));
    losses.push_back(build_quad_loss(ys.back(), zs.back()));
  }
  EXPECT_EQ(weighted_total(losses, Vector::Zero(4), ws), 0.0);
  Vector one = Vector::Zero(4);
  one(2) = 1.0;
  EXPECT_NEAR(weighted_total(losses, one, ws), 5 * eval(losses[2], ws[2]), 1e-12);
  // Duplicated-data oracle: c_j times the raw residual sum of term j.
  Vector c(4);
  c << 0.2, 1.0, 0.5, 0.0;
  double want = 0;
  for (int j = 0; j < 4; ++j) want += c(j) * (zs[j] - ys[j] * ws[j]).squaredNorm();
  EXPECT_NEAR(weighted_total(losses, c, ws), want, 1e-10);
}

TEST(QuadLoss, ConditioningAndErrors) {
  Matrix y(2, 2);
  y << 1, 0, 0, 1e-4;
  QuadLoss L = build_quad_loss(y, Vector::Ones(2));
  EXPECT_NEAR(condition_number(L), 1e8, 1e2);
  double k = recommend_kappa(L, 100.0);
  QuadLoss R = build_quad_loss(y, Vector::Ones(2), k);
  EXPECT_NEAR(condition_number(R), 100.0, 1e-6);
  EXPECT_EQ(recommend_kappa(build_quad_loss(Matrix::Identity(2, 2), Vector::Ones(2)), 10.0), 0.0);

  EXPECT_THROW(eval(L, Vector::Zero(3)), ParameterError);
  EXPECT_THROW(build_quad_loss(Matrix(0, 2), Vector(0)), ParameterError);
  EXPECT_THROW(build_quad_loss(y, Vector::Ones(2), -1.0), ParameterError);
}
