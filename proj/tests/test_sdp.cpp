#include <gtest/gtest.h>

#include <random>

#include "spc/errors.hpp"
#include "spc/sdp.hpp"

using namespace spc;

namespace {

// min tr(X) s.t. X_11 = 1 written as max <-I, X>.
SdpProblem trace_problem(int n) {
  SdpProblem p;
  p.block_sizes = {n};
  for (int i = 0; i < n; ++i) p.objective.push_back({0, i, i, -1.0});
  p.constraints = {{{0, 0, 0, 1.0}}};
  p.rhs = Eigen::VectorXd::Constant(1, 1.0);
  p.sense = Sense::Maximize;
  return p;
}

// Dual form: min sum_i c_i y_i s.t. F(y) = sum y_i F_i - F_0 PSD.
SdpProblem random_feasible(std::mt19937_64& rng, int dim, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SdpProblem p;
  p.block_sizes = {dim, -2};
  // y = 0 strictly feasible for the dual: F_0 = -I, and X = I strictly feasible
  // for the primal by choosing b_i = <A_i, I>.
  for (int i = 0; i < dim; ++i) p.objective.push_back({0, i, i, -1.0});
  p.objective.push_back({1, 0, 0, -1.0});
  p.objective.push_back({1, 1, 1, -1.0});
  p.rhs.resize(m);
  for (int k = 0; k < m; ++k) {
    SparseBlockMatrix a;
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        const double v = u(rng);
        a.push_back({0, i, j, v});
        if (i == j) tr += v;
      }
    }
    const double d0 = u(rng);
    const double d1 = u(rng);
    a.push_back({1, 0, 0, d0});
    a.push_back({1, 1, 1, d1});
    p.rhs(k) = tr + d0 + d1;
    p.constraints.push_back(a);
  }
  return p;
}

}  // namespace

TEST(SdpSolve, TraceWithPinnedCorner) {
  const auto p = trace_problem(3);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(p.quantity(s.raw_value()), 1.0, 1e-7);
  EXPECT_NEAR(s.x[0](0, 0), 1.0, 1e-7);
}

TEST(SdpSolve, DualFormScalarLmi) {
  // min y s.t. [[y,1],[1,y]] PSD  ->  y = 1
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {{0, 0, 1, -1.0}};
  p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}};
  p.rhs = Eigen::VectorXd::Constant(1, 1.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.y(0), 1.0, 1e-7);
  EXPECT_NEAR(s.dual_value, 1.0, 1e-7);
}

TEST(SdpSolve, LinearBlockOnly) {
  // min y1 + y2 s.t. y1 >= 1, y2 >= 2
  SdpProblem p;
  p.block_sizes = {-2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 2.0}};
  p.constraints = {{{0, 0, 0, 1.0}}, {{0, 1, 1, 1.0}}};
  p.rhs = Eigen::Vector2d(1.0, 1.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.dual_value, 3.0, 1e-7);
  EXPECT_NEAR(s.y(0), 1.0, 1e-6);
  EXPECT_NEAR(s.y(1), 2.0, 1e-6);
}

TEST(SdpSolve, InfeasibleLmiGivesPrimalRay) {
  // y >= 1 and -y >= 1 cannot both hold; X = I is an improving primal ray.
  SdpProblem p;
  p.block_sizes = {-2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, -1.0}}};
  p.rhs = Eigen::VectorXd::Constant(1, 0.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::DualInfeasible);
  EXPECT_LE(s.infeasibility_residual, 1e-8);
  EXPECT_NEAR(inner(p.objective, s.x), 1.0, 1e-12);
}

TEST(SdpSolve, UnboundedLmiMinimum) {
  // min -y s.t. y >= 0 is unbounded below: the primal side is infeasible.
  SdpProblem p;
  p.block_sizes = {1};
  p.constraints = {{{0, 0, 0, 1.0}}};
  p.rhs = Eigen::VectorXd::Constant(1, -1.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::PrimalInfeasible);
  EXPECT_NEAR(p.rhs.dot(s.y), -1.0, 1e-12);
  EXPECT_GE(s.y(0), -1e-12);
}

TEST(SdpSolve, UnboundedPrimalWithoutConstraints) {
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  p.rhs = Eigen::VectorXd(0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::DualInfeasible);
  EXPECT_NEAR(inner(p.objective, s.x), 1.0, 1e-9);
}

TEST(SdpSolve, EmptyRowWithNonzeroRhs) {
  SdpProblem p;
  p.block_sizes = {1};
  p.objective = {{0, 0, 0, 1.0}};
  p.constraints = {{}};
  p.rhs = Eigen::VectorXd::Constant(1, 2.0);
  EXPECT_EQ(solve(p).status, SdpStatus::PrimalInfeasible);
}

TEST(SdpSolve, RejectsMalformed) {
  auto p = trace_problem(2);
  p.constraints[0].push_back({0, 1, 0, 1.0});
  EXPECT_THROW(solve(p), InvalidInput);
  p = trace_problem(2);
  p.constraints[0].push_back({3, 0, 0, 1.0});
  EXPECT_THROW(solve(p), InvalidInput);
  p = trace_problem(2);
  p.rhs = Eigen::VectorXd::Constant(2, 1.0);
  EXPECT_THROW(solve(p), InvalidInput);
  p = trace_problem(2);
  p.objective[0].value = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve(p), InvalidInput);
  p = trace_problem(2);
  p.block_sizes = {-2};
  p.objective.push_back({0, 0, 1, 1.0});
  EXPECT_THROW(solve(p), InvalidInput);
}

TEST(SdpSolve, WeakDualityAndRecomputedResiduals) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_feasible(rng, 4 + trial % 3, 3 + trial % 5);
    const auto s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal) << trial;
    // max-form primal never exceeds the min-form dual
    EXPECT_LE(s.primal_value, s.dual_value + 1e-8) << trial;
    const auto r = compute_residuals(p, s.x, s.y);
    EXPECT_LE(r.primal, 1e-7);
    EXPECT_LE(r.dual, 1e-7);
    EXPECT_LE(r.gap, 1e-7);
  }
}

TEST(SdpSolve, UnreachableToleranceKeepsBestIterate) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_feasible(rng, 5, 4);
    const auto ok = solve(p);
    ASSERT_EQ(ok.status, SdpStatus::Optimal);
    SolverOptions tight;
    tight.tol_gap = tight.tol_feas = 1e-16;
    const auto s = solve(p, tight);
    EXPECT_NE(s.status, SdpStatus::Optimal);
    const auto worst = [](const SdpResiduals& r) { return std::max({r.primal, r.dual, r.gap}); };
    EXPECT_LE(worst(s.residuals), 1e-7) << trial;
    EXPECT_NEAR(s.raw_value(), ok.raw_value(), 1e-6 * (1.0 + std::abs(ok.raw_value())));
  }
}

TEST(SdpSolve, Deterministic) {
  std::mt19937_64 rng(3);
  const auto p = random_feasible(rng, 5, 4);
  const auto a = solve(p);
  const auto b = solve(p);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Sdpa, GoldenToy) {
  auto p = trace_problem(2);
  p.origin.clear();
  const std::string expected =
      "1\n"
      "1\n"
      "2\n"
      "1\n"
      "0 1 1 1 -1\n"
      "0 1 2 2 -1\n"
      "1 1 1 1 1\n";
  EXPECT_EQ(export_sdpa(p), expected);
}

TEST(Sdpa, RoundTripIdempotent) {
  std::mt19937_64 rng(11);
  auto p = random_feasible(rng, 4, 3);
  p.origin = "random test";
  p.rhs(0) = 0.1;  // not exactly representable in short decimal
  const std::string t1 = export_sdpa(p);
  const SdpProblem q = parse_sdpa(t1);
  EXPECT_EQ(q.origin, "random test");
  EXPECT_EQ(q.rhs, p.rhs);
  EXPECT_EQ(export_sdpa(q), t1);
}

TEST(Sdpa, ParsesPunctuationAndLowerTriangle) {
  const std::string t =
      "\"comment\n"
      "1\n1\n{2}\n(1.5)\n"
      "1 1 2 1 0.5\n"
      "1 1 1 1 1\n";
  const auto p = parse_sdpa(t);
  ASSERT_EQ(p.num_constraints(), 1);
  EXPECT_DOUBLE_EQ(p.rhs(0), 1.5);
  ASSERT_EQ(p.constraints[0].size(), 2u);
  EXPECT_EQ(p.constraints[0][1].row, 0);
  EXPECT_EQ(p.constraints[0][1].col, 1);
}

TEST(Sdpa, RejectsGarbage) {
  EXPECT_THROW(parse_sdpa("x\n"), InvalidInput);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n"), InvalidInput);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n1\n2 1 1 1 1\n"), InvalidInput);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n1\n1 1 3 1 1\n"), InvalidInput);
}
