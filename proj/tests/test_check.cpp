#include <gtest/gtest.h>

#include "json.hpp"

#include "spc/check.hpp"
#include "spc/errors.hpp"
#include "spc/lmi.hpp"
#include "support.hpp"

using namespace spc;
using spc::testing::sym_entry;
using spc::testing::unit_disk;

namespace {

CheckOptions only(bool sdfp, bool sos, bool moment) {
  CheckOptions o;
  o.sdfp = sdfp;
  o.sos = sos;
  o.moment = moment;
  return o;
}

}  // namespace

TEST(Check, DiskVerdicts) {
  EXPECT_EQ(check_containment(ball_pencil(2, 0.7), unit_disk(), {}).verdict, VerdictKind::Certified);
  const CheckReport mid = check_containment(ball_pencil(2, 0.8), unit_disk(), {});
  EXPECT_EQ(mid.verdict, VerdictKind::Inconclusive);
  EXPECT_EQ(mid.exit_code(), 2);

  const CheckReport out = check_containment(ball_pencil(2, 1.1), unit_disk(), {});
  ASSERT_EQ(out.verdict, VerdictKind::Refuted);
  ASSERT_TRUE(out.witness.has_value());
  EXPECT_TRUE(ball_pencil(2, 1.1).contains_point(*out.witness, 1e-9));
  EXPECT_LT(min_eigenvalue(unit_disk().evaluate(*out.witness)), 0.0);
  EXPECT_EQ(out.exit_code(), 1);
}

TEST(Check, OrderThreeCertifiesWhereOrderTwoCannot) {
  CheckOptions o = only(false, false, true);
  o.order = 3;
  const CheckReport r = check_containment(ball_pencil(2, 0.8), unit_disk(), o);
  EXPECT_EQ(r.verdict, VerdictKind::Certified);
  ASSERT_EQ(r.methods.size(), 1u);
  EXPECT_NEAR(r.methods[0].value, 0.2, 2e-3);
  EXPECT_EQ(r.methods[0].order, 3);
}

TEST(Check, MethodSelectionAndOrders) {
  CheckOptions o;
  o.order = 3;
  const CheckReport r = check_containment(ball_pencil(2, 0.5), unit_disk(), o);
  ASSERT_EQ(r.methods.size(), 3u);
  EXPECT_EQ(r.methods[0].method, "sdfp");
  EXPECT_EQ(r.methods[1].method, "sos");
  EXPECT_EQ(r.methods[1].order, 1);
  EXPECT_EQ(r.methods[2].method, "moment");
  EXPECT_EQ(r.methods[2].order, 3);
  for (const auto& m : r.methods) {
    EXPECT_TRUE(m.certifies) << m.method;
    EXPECT_EQ(m.status, SdpStatus::Optimal);
    EXPECT_LE(m.residuals.primal, 1e-6);
  }
}

TEST(Check, EmptyInnerSetIsVacuouslyCertified) {
  // [[x, 1], [1, 0]] is PSD nowhere.
  const LinearPencil a({sym_entry(2, {{0, 1, 1.0}}), sym_entry(2, {{0, 0, 1.0}})});
  const LinearPencil b({SymMatrix::Identity(1) * -1.0, SymMatrix::Zero(1)});
  const CheckReport r = check_containment(a, b, {});
  EXPECT_EQ(r.verdict, VerdictKind::Certified);
  EXPECT_TRUE(r.methods.empty());
}

TEST(Check, LinealityMismatchRefutes) {
  // Strip |x1| <= 1 (x2 free) is not inside the unit disk.
  const LinearPencil strip({SymMatrix::Identity(2), sym_entry(2, {{0, 0, 1.0}, {1, 1, -1.0}}), SymMatrix::Zero(2)});
  const CheckReport r = check_containment(strip, unit_disk(), {});
  ASSERT_EQ(r.verdict, VerdictKind::Refuted);
  EXPECT_TRUE(strip.contains_point(*r.witness, 1e-9));
  EXPECT_LT(r.witness_eig, 0.0);
}

TEST(Check, CommonLinealityIsSplitOff) {
  // Disk x strip inside disk x strip: the x3 direction is common to both.
  auto lift = [](const LinearPencil& p) {
    std::vector<SymMatrix> c(p.coeffs().begin(), p.coeffs().end());
    c.push_back(SymMatrix::Zero(p.k()));
    return LinearPencil(c);
  };
  const CheckReport r = check_containment(lift(ball_pencil(2, 0.7)), lift(unit_disk()), {});
  EXPECT_EQ(r.lineality_removed, 1);
  EXPECT_EQ(r.verdict, VerdictKind::Certified);

  CheckOptions raw;
  raw.reduce = false;
  raw.sdfp = raw.sos = false;
  // Without the split the moment relaxation sees an unbounded inner set.
  const CheckReport u = check_containment(lift(ball_pencil(2, 0.7)), lift(unit_disk()), raw);
  EXPECT_NE(u.verdict, VerdictKind::Refuted);
}

TEST(Check, Preconditions) {
  EXPECT_THROW(check_containment(ball_pencil(3, 1.0), unit_disk(), {}), InvalidInput);
  CheckOptions o;
  o.order = 1;
  EXPECT_THROW(check_containment(ball_pencil(2, 1.0), unit_disk(), o), OrderTooSmall);
  EXPECT_THROW(check_containment(ball_pencil(2, 1.0), unit_disk(), only(false, false, false)), InvalidInput);
}

TEST(Check, ReportJsonSchema) {
  const CheckReport r = check_containment(ball_pencil(2, 1.1), unit_disk(), {});
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["verdict"], "refuted");
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_EQ(j["inputs"]["n"], 2);
  EXPECT_EQ(j["methods"].size(), 3u);
  for (const auto& m : j["methods"]) {
    EXPECT_TRUE(m.contains("seconds"));
    EXPECT_TRUE(m["solver"].contains("primal_residual"));
    EXPECT_TRUE(m["solver"].contains("dual_residual"));
    EXPECT_TRUE(m["solver"].contains("gap"));
  }
  EXPECT_EQ(j["refutation"]["x"].size(), 2u);
}

TEST(Check, InfiniteValuesSerialiseAsStrings) {
  // Empty inner set with reduction disabled: sos order 1 is unbounded.
  const LinearPencil a({sym_entry(2, {{0, 1, 1.0}}), sym_entry(2, {{0, 0, 1.0}})});
  CheckOptions o = only(false, true, false);
  o.reduce = false;
  o.order = 3;
  const LinearPencil b({SymMatrix::Identity(1), SymMatrix::Identity(1)});
  const CheckReport r = check_containment(a, b, o);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["methods"][0]["value"], "inf");
  EXPECT_EQ(j["verdict"], "certified");
}

TEST(Extent, BallAndHalfline) {
  const auto [lo, hi] = extent(ball_pencil(3, 0.5), Eigen::Vector3d(1, 1, 0));
  EXPECT_NEAR(lo, -0.5 * std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(hi, 0.5 * std::sqrt(2.0), 1e-6);
  const LinearPencil half({SymMatrix::Zero(1), SymMatrix::Identity(1)});
  const auto [l2, h2] = extent(half, Eigen::VectorXd::Ones(1));
  EXPECT_NEAR(l2, 0.0, 1e-6);
  EXPECT_TRUE(std::isinf(h2));
  EXPECT_THROW(extent(half, Eigen::VectorXd::Ones(2)), InvalidInput);
}

TEST(RandomInstance, DeterministicBoundedWithInterior) {
  RandomInstanceOptions o;
  o.n = 3;
  o.k = 4;
  o.l = 5;
  const RandomInstance x = random_instance(o, 7);
  const RandomInstance y = random_instance(o, 7);
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.b, y.b);
  EXPECT_FALSE(x.a == random_instance(o, 8).a);
  EXPECT_EQ(x.a.k(), 4);
  EXPECT_EQ(x.b.k(), 5);
  EXPECT_EQ(x.b.coeff(0)(0, 0), 2.0);
  for (int i = 0; i < 3; ++i) {
    const auto [lo, hi] = extent(x.a, Eigen::VectorXd::Unit(3, i));
    EXPECT_TRUE(std::isfinite(lo) && std::isfinite(hi));
  }
  EXPECT_GT(feasibility_probe(x.a).margin, 0.0);
  EXPECT_GT(feasibility_probe(x.b).margin, 0.0);
}

TEST(RandomInstance, DiscardsUnboundedDraws) {
  // With a single variable and a 2 x 2 pencil most draws leave x unbounded
  // on one side, so some discards are expected over a few seeds.
  RandomInstanceOptions o;
  o.n = 1;
  o.k = 2;
  o.l = 2;
  int discarded = 0;
  for (std::uint64_t s = 0; s < 5; ++s) discarded += random_instance(o, s).discarded;
  EXPECT_GT(discarded, 0);
  EXPECT_THROW(random_instance(RandomInstanceOptions{0, 2, 2}, 1), InvalidInput);
}
