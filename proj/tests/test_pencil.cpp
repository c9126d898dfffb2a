#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "spc/errors.hpp"
#include "spc/pencil.hpp"
#include "support.hpp"

using namespace spc;
using spc::testing::unit_disk;
using spc::testing::uniform_point;

TEST(Pencil, EvaluateExamples) {
  const auto disk = unit_disk();
  EXPECT_EQ(disk.evaluate(Eigen::Vector2d::Zero()), disk.coeff(0));
  Eigen::MatrixXd want(2, 2);
  want << 2, 0, 0, 0;
  EXPECT_EQ(disk.evaluate(Eigen::Vector2d(1, 0)).matrix(), want);

  Eigen::MatrixXd ball = Eigen::MatrixXd::Identity(3, 3);
  ball(0, 2) = ball(2, 0) = 1.0;
  EXPECT_EQ(ball_pencil(2, 1.0).evaluate(Eigen::Vector2d(1, 0)).matrix(), ball);
  EXPECT_THROW(disk.evaluate(Eigen::Vector3d::Zero()), InvalidInput);
}

TEST(Pencil, ConstructorChecksShapes) {
  EXPECT_THROW(LinearPencil({}), InvalidInput);
  EXPECT_THROW(LinearPencil({SymMatrix::Identity(2), SymMatrix::Identity(3)}), InvalidInput);
}

TEST(Pencil, Membership) {
  const auto disk = unit_disk();
  EXPECT_FALSE(disk.contains_point(Eigen::Vector2d(1.1, 0), 1e-9));
  EXPECT_TRUE(disk.contains_point(Eigen::Vector2d(1.0, 0), 1e-9));
  const auto e = elliptope_pencil(3);
  EXPECT_TRUE(e.contains_point(Eigen::Vector3d(1, 1, 1), 1e-9));
  EXPECT_FALSE(e.contains_point(Eigen::Vector3d(1, 1, 1.01), 1e-9));
}

TEST(Pencil, EvaluateIsAffine) {
  std::mt19937_64 rng(1);
  const auto p = random_pencil({3, 5, 0.5, 1.0}, 9);
  for (int s = 0; s < 100; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, 3, -2, 2);
    const Eigen::VectorXd y = uniform_point(rng, 3, -2, 2);
    const Eigen::MatrixXd mid = p.evaluate((x + y) / 2).matrix();
    const Eigen::MatrixXd avg = (p.evaluate(x).matrix() + p.evaluate(y).matrix()) / 2;
    EXPECT_LE((mid - avg).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Ellipsoid, MatchesAnalyticInequality) {
  const Eigen::Vector3d axes(0.5, 1.0, 2.0);
  const auto p = ellipsoid_pencil(axes);
  std::mt19937_64 rng(2);
  for (int s = 0; s < 10000; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, 3, -2.2, 2.2);
    const double q = (x.array() / axes.array()).square().sum();
    if (std::abs(q - 1.0) < 1e-6) continue;
    EXPECT_EQ(p.contains_point(x, 1e-9), q <= 1.0);
  }
  EXPECT_THROW(ellipsoid_pencil(Eigen::Vector2d(1.0, 0.0)), InvalidInput);
  EXPECT_THROW(ellipsoid_pencil(Eigen::VectorXd(0)), InvalidInput);
}

TEST(Ellipsoid, IntervalInOneVariable) {
  const auto p = ellipsoid_pencil(Eigen::VectorXd::Ones(1));
  EXPECT_TRUE(p.contains_point(Eigen::VectorXd::Constant(1, -1.0), 1e-12));
  EXPECT_FALSE(p.contains_point(Eigen::VectorXd::Constant(1, 1.01), 1e-9));
  EXPECT_TRUE(p.is_monic());
}

TEST(Polytope, SquareAndHalfline) {
  Eigen::MatrixXd a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto sq = polytope_pencil(a, Eigen::VectorXd::Ones(4));
  EXPECT_TRUE(sq.is_monic());
  EXPECT_EQ(sq.k(), 4);
  const auto half = polytope_pencil(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1));
  EXPECT_FALSE(half.is_monic());
  EXPECT_TRUE(half.contains_point(Eigen::VectorXd::Constant(1, 1e6), 0.0));
  EXPECT_FALSE(half.contains_point(Eigen::VectorXd::Constant(1, -1e-3), 1e-9));

  std::mt19937_64 rng(4);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Random(5, 3);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(5);
  const auto p = polytope_pencil(r, b);
  for (int s = 0; s < 500; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, 3, -1, 1);
    const Eigen::VectorXd v = b + r * x;
    if (v.cwiseAbs().minCoeff() < 1e-9) continue;
    EXPECT_EQ(p.contains_point(x, 0.0), v.minCoeff() >= 0.0);
  }
}

TEST(Elliptope, ShapeAndMinors) {
  const auto e = elliptope_pencil(3);
  EXPECT_EQ(e.n(), 3);
  EXPECT_EQ(e.k(), 3);
  EXPECT_EQ(e.evaluate(Eigen::Vector3d::Zero()).matrix(), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(e.coeff(1)(0, 1), 1.0);  // (1,2)
  EXPECT_EQ(e.coeff(2)(0, 2), 1.0);  // (1,3)
  EXPECT_EQ(e.coeff(3)(1, 2), 1.0);  // (2,3)
  EXPECT_THROW(elliptope_pencil(1), InvalidInput);

  const auto e4 = elliptope_pencil(4);
  std::mt19937_64 rng(8);
  int members = 0;
  for (int s = 0; s < 2000; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, 6, -1, 1);
    if (!e4.contains_point(x, 0.0)) continue;
    ++members;
    for (int i = 0; i < 6; ++i) EXPECT_GE(1.0 - x(i) * x(i), 0.0);
  }
  EXPECT_GT(members, 0);
}

TEST(Extend, PreservesMembership) {
  const auto disk = unit_disk();
  const auto ext = extend(disk);
  ASSERT_EQ(ext.k(), 3);
  EXPECT_EQ(ext.coeff(0)(0, 0), 1.0);
  for (int p = 1; p <= 2; ++p) EXPECT_EQ(ext.coeff(p).matrix().row(0).norm(), 0.0);
  std::mt19937_64 rng(6);
  for (int s = 0; s < 2000; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, 2, -1.5, 1.5);
    if (std::abs(x.norm() - 1.0) < 1e-9) continue;
    EXPECT_EQ(disk.contains_point(x, 0.0), ext.contains_point(x, 0.0));
  }
}

TEST(Scaled, ScalesTheSet) {
  const auto p = unit_disk().scaled(0.5);
  EXPECT_TRUE(p.contains_point(Eigen::Vector2d(0.5, 0.0), 1e-12));
  EXPECT_FALSE(p.contains_point(Eigen::Vector2d(0.51, 0.0), 1e-9));
  EXPECT_THROW(unit_disk().scaled(0.0), InvalidInput);
}

TEST(RandomPencil, DeterministicWithRecipeStatistics) {
  const RandomPencilOptions opts{3, 6, 0.35, 1.0};
  EXPECT_EQ(random_pencil(opts, 42), random_pencil(opts, 42));
  EXPECT_FALSE(random_pencil(opts, 42) == random_pencil(opts, 43));

  const RandomPencilOptions outer{4, 12, 0.35, 2.0};
  long long total = 0, nonzero = 0;
  for (std::uint64_t seed = 0; total < 10000; ++seed) {
    const auto p = random_pencil(outer, seed);
    for (int q = 0; q <= p.n(); ++q) {
      const Eigen::MatrixXd& m = p.coeff(q).matrix();
      EXPECT_EQ(m.diagonal(), q == 0 ? Eigen::VectorXd::Constant(12, 2.0) : Eigen::VectorXd::Zero(12));
      for (int i = 0; i < 12; ++i) {
        for (int j = i + 1; j < 12; ++j) {
          ++total;
          nonzero += m(i, j) != 0.0;
          EXPECT_LE(std::abs(m(i, j)), 1.0);
        }
      }
    }
  }
  EXPECT_NEAR(static_cast<double>(nonzero) / static_cast<double>(total), 0.35, 0.05);
  EXPECT_THROW(random_pencil({2, 3, 0.0, 1.0}, 1), InvalidInput);
  EXPECT_THROW(random_pencil({2, 3, 0.5, -1.0}, 1), InvalidInput);
}

TEST(MapToPencils, IdentityMapGivesEqualPencils) {
  const auto [a, b] = map_to_pencils(identity_map(2));
  EXPECT_EQ(a.n(), 2);
  for (int q = 0; q <= a.n(); ++q) {
    EXPECT_LE((a.coeff(q).matrix() - b.coeff(q).matrix()).norm(), 1e-15);
  }
}

TEST(MapToPencils, ChoiTypeSizesAndPositivityOracle) {
  const MapSpec m = choi_type_map();
  const auto [a, b] = map_to_pencils(m);
  EXPECT_EQ(a.n(), 5);
  EXPECT_EQ(a.k(), 3);
  EXPECT_EQ(b.k(), 3);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int s = 0; s < 1000; ++s) {
    Eigen::MatrixXd f(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) f(i, j) = g(rng);
    }
    Eigen::MatrixXd x = f * f.transpose();
    x /= x.trace();
    const Eigen::VectorXd coords = slice_coordinates(SymMatrix(x));
    EXPECT_LE((a.evaluate(coords).matrix() - x).norm(), 1e-12);
    EXPECT_LE((b.evaluate(coords).matrix() - m.apply(x)).norm(), 1e-12);
    EXPECT_TRUE(a.contains_point(coords, 1e-12));
  }
}

TEST(MapSpec, RejectsMalformedImages) {
  std::vector<Eigen::MatrixXd> images(4, Eigen::MatrixXd::Zero(2, 2));
  EXPECT_NO_THROW(MapSpec(2, 2, images));
  images.pop_back();
  EXPECT_THROW(MapSpec(2, 2, images), InvalidInput);
  std::vector<Eigen::MatrixXd> skew(4, Eigen::MatrixXd::Zero(2, 2));
  skew[1](0, 1) = 1.0;  // Phi(E_12) without matching Phi(E_21)
  EXPECT_THROW(MapSpec(2, 2, skew), InvalidInput);
}

TEST(PencilJson, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = random_pencil({2, 4, 0.6, 1.0}, seed).scaled(0.37);
    EXPECT_EQ(pencil_from_json(pencil_to_json(p)), p);
  }
}

TEST(PencilJson, FileRoundTrip) {
  const std::string path = ::testing::TempDir() + "pencil_roundtrip.json";
  write_pencil_file(elliptope_pencil(3), path);
  EXPECT_EQ(read_pencil_file(path), elliptope_pencil(3));
  std::remove(path.c_str());
  EXPECT_THROW(read_pencil_file(path), InvalidInput);
}

TEST(PencilJson, RejectsMalformed) {
  EXPECT_THROW(pencil_from_json("{"), InvalidInput);
  EXPECT_THROW(pencil_from_json(R"({"n":0})"), InvalidInput);
  EXPECT_THROW(pencil_from_json(R"({"n":1,"k":1,"coeffs":[[1]]})"), InvalidInput);
  EXPECT_THROW(pencil_from_json(R"({"n":0,"k":2,"coeffs":[[1,0,0]]})"), InvalidInput);
  EXPECT_THROW(pencil_from_json(R"({"n":0,"k":2,"coeffs":[[1,0,1,1]]})"), InvalidInput);
  EXPECT_THROW(pencil_from_json(R"({"n":0,"k":1,"coeffs":[["a"]]})"), InvalidInput);
  const auto p = pencil_from_json(R"({"n":0,"k":2,"coeffs":[[1,0.5,0.5,1]]})");
  EXPECT_EQ(p.coeff(0)(0, 1), 0.5);
}
