#include <gtest/gtest.h>

#include <random>

#include "spc/errors.hpp"
#include "spc/sosrelax.hpp"
#include "support.hpp"

using namespace spc;
using spc::testing::unit_disk;

namespace {

std::vector<Eigen::VectorXd> sample_points(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i) pts.push_back(spc::testing::uniform_point(rng, n, -1, 1));
  return pts;
}

}  // namespace

TEST(CountUnknowns, FormulaValues) {
  EXPECT_EQ(count_unknowns(2, 3, 2, 0, 0).sos_count, 25.0);
  EXPECT_EQ(count_unknowns(2, 3, 2, 2, 0).moment_count, 105.0);
  EXPECT_EQ(count_unknowns(0, 3, 0, 3, 0).moment_count, 0.0);
  EXPECT_EQ(count_unknowns(2, 3, 2, 0, 1).sos_count, 25.0 - 6.0);
  EXPECT_THROW(count_unknowns(-1, 1, 1, 0, 0), InvalidInput);
  EXPECT_EQ(binomial(6, 2), 15.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
}

TEST(SosRelaxation, Layout) {
  const ContainmentProblem cp{ball_pencil(2, 0.7), unit_disk()};
  const SosRelaxation rel = build_sos_relaxation(cp, 1);
  // Gram bases of degree 1 in two variables: N = 3.
  EXPECT_EQ(rel.sdp.block_sizes, (std::vector<int>{3 * 2 * 3, 2 * 3, -2}));
  // Monomials of degree <= 3 times the 3 entries of a symmetric 2 x 2.
  EXPECT_EQ(rel.sdp.num_constraints(), 10 * 3);
  EXPECT_THROW(build_sos_relaxation(cp, -1), InvalidInput);
  EXPECT_THROW(build_sos_relaxation({unit_disk(), ball_pencil(3, 1.0)}, 0), InvalidInput);
}

TEST(LambdaSos, BallInElliptopeSmall) {
  const auto e = elliptope_pencil(3);
  const auto r = lambda_sos({ball_pencil(3, 0.5), e}, 0);
  EXPECT_NEAR(r.value, 1.0 - 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_EQ(r.verdict.kind, VerdictKind::Certified);
}

TEST(LambdaSos, EqualMonicPencilsAreCertified) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_pencil({2, 3, 0.5, 1.0}, seed);
    const auto r = lambda_sos({a, a}, 0);
    EXPECT_GE(r.value, -1e-7);
  }
}

TEST(LambdaSos, DiskValuesAndVerdicts) {
  const auto in = lambda_sos({ball_pencil(2, 0.7), unit_disk()}, 0);
  EXPECT_EQ(in.verdict.kind, VerdictKind::Certified);
  EXPECT_NEAR(in.value, 0.0100505, 2e-5);
  const auto out = lambda_sos({ball_pencil(2, 0.8), unit_disk()}, 0);
  EXPECT_EQ(out.verdict.kind, VerdictKind::Inconclusive);
  EXPECT_LT(out.value, 0.0);
  EXPECT_NEAR(lambda_sos({ball_pencil(2, 0.8), unit_disk()}, 1).value, 0.2, 1e-5);
}

TEST(LambdaSos, PrintedRandomExperimentOrdersAgree) {
  const ContainmentProblem cp{spc::testing::random_experiment_a(), spc::testing::random_experiment_b()};
  const auto r0 = lambda_sos(cp, 0);
  const auto r1 = lambda_sos(cp, 1);
  EXPECT_NEAR(r0.value, 0.330, 5e-3);
  EXPECT_LE(r0.value, r1.value + 1e-6);
}

TEST(LambdaSos, GramIdentityHoldsPointwise) {
  const ContainmentProblem cp{spc::testing::random_experiment_a(), spc::testing::random_experiment_b()};
  for (int t : {0, 1}) {
    const SosRelaxation rel = build_sos_relaxation(cp, t);
    const SdpSolution sol = solve(rel.sdp);
    ASSERT_EQ(sol.status, SdpStatus::Optimal);
    EXPECT_LE(identity_residual(rel, cp, sol.x, sample_points(2, 20, 3)), 1e-7);
    EXPECT_NEAR(rel.lambda(sol.x), rel.sdp.quantity(sol.raw_value()), 1e-7);
  }
}

TEST(LambdaSos, LowerBoundOnGridMinimum) {
  int checked = 0;
  for (std::uint64_t seed = 300; checked < 5; seed += 2) {
    const auto a = random_pencil({2, 3, 0.5, 1.0}, seed);
    const auto b = random_pencil({2, 3, 0.5, 1.5}, seed + 1);
    const double w = spc::testing::box_half_width(a);
    if (!(w < 5.0)) continue;
    const double grid = spc::testing::grid_min_eig(a, b, w, 20000, seed);
    EXPECT_LE(lambda_sos({a, b}, 0).value, grid + 1e-6);
    ++checked;
  }
}

TEST(LambdaSos, EmptyInnerSetIsVacuous) {
  const LinearPencil empty({SymMatrix::Identity(1) * -1.0, SymMatrix::Zero(1), SymMatrix::Zero(1)});
  // Order 0 cannot match the linear part of B with a constant A.
  const auto r0 = lambda_sos({empty, unit_disk()}, 0);
  EXPECT_EQ(r0.verdict.kind, VerdictKind::Inconclusive);
  EXPECT_EQ(r0.value, -std::numeric_limits<double>::infinity());
  const auto r1 = lambda_sos({empty, unit_disk()}, 1);
  EXPECT_EQ(r1.verdict.kind, VerdictKind::Certified);
  EXPECT_EQ(r1.value, std::numeric_limits<double>::infinity());
}

TEST(LambdaSos, ReportsObservedCounts) {
  const auto r = lambda_sos({ball_pencil(2, 0.7), unit_disk()}, 0);
  EXPECT_EQ(r.equations, 9);
  EXPECT_EQ(r.unknowns, 1 + 21 + 3);
}
