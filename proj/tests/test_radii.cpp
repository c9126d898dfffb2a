#include <gtest/gtest.h>

#include <random>

#include "spc/errors.hpp"
#include "spc/radii.hpp"
#include "support.hpp"

using namespace spc;

TEST(Circumradius, Elliptopes) {
  for (int k : {3, 4}) {
    const auto e = elliptope_pencil(k);
    const auto r = circumradius_sq(e, Eigen::VectorXd::Zero(e.n()), 2);
    ASSERT_EQ(r.status, RadiusStatus::Finite);
    EXPECT_NEAR(r.value, e.n(), 1e-3);
  }
}

TEST(Circumradius, BallNeedsOrderTwo) {
  const auto ball = ball_pencil(3, 0.7);
  // Order one only sees A(first moments) >= 0, so second moments are free.
  EXPECT_EQ(circumradius_sq(ball, Eigen::VectorXd::Zero(3), 1).status, RadiusStatus::Unbounded);
  const auto r = circumradius_sq(ball, Eigen::VectorXd::Zero(3), 2);
  ASSERT_EQ(r.status, RadiusStatus::Finite);
  EXPECT_NEAR(r.value, 0.49, 1e-6);
}

TEST(Circumradius, OffCentreBound) {
  const auto r = circumradius_sq(ball_pencil(2, 1.0), Eigen::Vector2d(1.0, 0.0), 2);
  ASSERT_EQ(r.status, RadiusStatus::Finite);
  EXPECT_NEAR(r.value, 4.0, 1e-5);
}

TEST(Circumradius, UpperBoundOnSamplesAndMonotone) {
  std::mt19937_64 rng(7);
  const auto e = elliptope_pencil(3);
  const Eigen::Vector3d c(0.1, -0.2, 0.05);
  const double v2 = circumradius_sq(e, c, 2).value;
  const double v3 = circumradius_sq(e, c, 3).value;
  EXPECT_LE(v3, v2 + 1e-6);
  double best = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Eigen::VectorXd x = spc::testing::uniform_point(rng, 3, -1, 1);
    if (e.contains_point(x, 0.0)) best = std::max(best, (x - c).squaredNorm());
  }
  EXPECT_GE(v3, best - 1e-6);
}

TEST(Circumradius, Errors) {
  EXPECT_THROW(circumradius_sq(ball_pencil(2, 1.0), Eigen::Vector3d::Zero(), 2), InvalidInput);
  EXPECT_THROW(circumradius_sq(ball_pencil(2, 1.0), Eigen::Vector2d::Zero(), 0), OrderTooSmall);
}

TEST(Boundedness, Certificates) {
  const auto e = boundedness_certificate(elliptope_pencil(3), 2);
  EXPECT_TRUE(e.bounded);
  EXPECT_EQ(e.n_bound, 3);

  const auto half = polytope_pencil(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1));
  EXPECT_FALSE(boundedness_certificate(half, 1).bounded);
  EXPECT_FALSE(boundedness_certificate(half, 2).bounded);

  Eigen::MatrixXd a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto sq = boundedness_certificate(polytope_pencil(a, Eigen::VectorXd::Ones(4)), 2);
  EXPECT_TRUE(sq.bounded);
  EXPECT_EQ(sq.n_bound, 2);
}
