#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "spc/spc.h"

namespace {

struct Owned {
  spc_pencil* p = nullptr;
  ~Owned() { spc_pencil_free(p); }
};

spc_pencil* disk() {
  const double c[12] = {1, 0, 0, 1, 1, 0, 0, -1, 0, 1, 1, 0};
  spc_pencil* p = nullptr;
  EXPECT_EQ(spc_pencil_create(2, 2, c, &p), SPC_OK);
  return p;
}

spc_pencil* ball(int n, double r) {
  spc_pencil* p = nullptr;
  EXPECT_EQ(spc_pencil_ball(n, r, &p), SPC_OK);
  return p;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(spc_version(), "1.0.0");
  EXPECT_STREQ(spc_status_name(SPC_OK), "ok");
  EXPECT_STREQ(spc_status_name(SPC_ERR_NUMERICAL), "numerical failure");
}

TEST(CApi, PencilCreateAndCoefficients) {
  Owned d{disk()};
  EXPECT_EQ(spc_pencil_n(d.p), 2);
  EXPECT_EQ(spc_pencil_k(d.p), 2);
  double c[12];
  ASSERT_EQ(spc_pencil_coeffs(d.p, c, 12), SPC_OK);
  EXPECT_EQ(c[4], 1.0);
  EXPECT_EQ(c[7], -1.0);
  EXPECT_EQ(spc_pencil_coeffs(d.p, c, 11), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(spc_pencil_n(nullptr), -1);

  double x[2] = {0.6, 0.8};
  double lam = 0.0;
  ASSERT_EQ(spc_pencil_min_eig(d.p, x, 2, &lam), SPC_OK);
  EXPECT_NEAR(lam, 0.0, 1e-12);
  EXPECT_EQ(spc_pencil_min_eig(d.p, x, 3, &lam), SPC_ERR_INVALID_INPUT);
  EXPECT_NE(std::string(spc_last_error()).find("differs"), std::string::npos);
}

TEST(CApi, CreateRejectsAsymmetryAndBadShapes) {
  const double c[4] = {1, 2, 3, 1};
  spc_pencil* p = nullptr;
  EXPECT_EQ(spc_pencil_create(0, 2, c, &p), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(p, nullptr);
  EXPECT_EQ(spc_pencil_create(-1, 2, c, &p), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(spc_pencil_create(0, 2, nullptr, &p), SPC_ERR_NULL_ARG);
}

TEST(CApi, JsonRoundTrip) {
  Owned d{disk()};
  char* text = nullptr;
  ASSERT_EQ(spc_pencil_to_json(d.p, &text), SPC_OK);
  Owned back;
  ASSERT_EQ(spc_pencil_from_json(text, &back.p), SPC_OK);
  spc_string_free(text);
  double c1[12], c2[12];
  spc_pencil_coeffs(d.p, c1, 12);
  spc_pencil_coeffs(back.p, c2, 12);
  EXPECT_EQ(std::memcmp(c1, c2, sizeof c1), 0);

  Owned bad;
  EXPECT_EQ(spc_pencil_from_json("{\"n\": 1", &bad.p), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(spc_pencil_read("/nonexistent/p.json", &bad.p), SPC_ERR_INVALID_INPUT);
}

TEST(CApi, FileRoundTrip) {
  Owned e;
  ASSERT_EQ(spc_pencil_elliptope(3, &e.p), SPC_OK);
  const std::string path = ::testing::TempDir() + "capi_elliptope.json";
  ASSERT_EQ(spc_pencil_write(e.p, path.c_str()), SPC_OK);
  Owned r;
  ASSERT_EQ(spc_pencil_read(path.c_str(), &r.p), SPC_OK);
  EXPECT_EQ(spc_pencil_n(r.p), 3);
  EXPECT_EQ(spc_pencil_k(r.p), 3);
  std::remove(path.c_str());
}

TEST(CApi, MomentSosSdfpOnDisks) {
  Owned a{ball(2, 0.7)};
  Owned b{disk()};
  spc_options o;
  spc_options_default(&o);
  EXPECT_EQ(o.order, 2);
  EXPECT_EQ(o.r, 1.0);
  EXPECT_EQ(o.R, 2.0);
  EXPECT_EQ(o.tol, 1e-7);

  spc_value v;
  ASSERT_EQ(spc_mu_mom(a.p, b.p, 2, &o, &v), SPC_OK);
  EXPECT_NEAR(v.value, 0.0101, 2e-3);
  EXPECT_EQ(v.verdict, SPC_CERTIFIED);
  EXPECT_EQ(v.solver_status, SPC_SOLVER_OPTIMAL);
  EXPECT_LE(v.primal_residual, 1e-6);
  EXPECT_GT(v.iterations, 0);

  ASSERT_EQ(spc_lambda_sos(a.p, b.p, 0, &o, &v), SPC_OK);
  EXPECT_NEAR(v.value, 0.0100505, 1e-5);

  ASSERT_EQ(spc_sdfp(a.p, b.p, &o, &v), SPC_OK);
  EXPECT_EQ(v.verdict, SPC_CERTIFIED);

  Owned far{ball(2, 0.708)};
  ASSERT_EQ(spc_sdfp(far.p, b.p, nullptr, &v), SPC_OK);
  EXPECT_EQ(v.verdict, SPC_REFUTED);

  EXPECT_EQ(spc_mu_mom(a.p, b.p, 1, &o, &v), SPC_ERR_ORDER);
  EXPECT_EQ(spc_mu_mom(a.p, nullptr, 2, &o, &v), SPC_ERR_NULL_ARG);
  Owned mismatch{ball(3, 1.0)};
  EXPECT_EQ(spc_mu_mom(mismatch.p, b.p, 2, &o, &v), SPC_ERR_INVALID_INPUT);
}

TEST(CApi, CheckReport) {
  Owned a{ball(2, 1.1)};
  Owned b{disk()};
  spc_report* r = nullptr;
  ASSERT_EQ(spc_check(a.p, b.p, nullptr, &r), SPC_OK);
  EXPECT_EQ(spc_report_verdict(r), SPC_REFUTED);
  EXPECT_EQ(spc_report_exit_code(r), 1);
  ASSERT_EQ(spc_report_method_count(r), 3u);
  spc_value v;
  const char* name = nullptr;
  int order = -1;
  ASSERT_EQ(spc_report_method(r, 2, &v, &name, &order), SPC_OK);
  EXPECT_STREQ(name, "moment");
  EXPECT_EQ(order, 2);
  EXPECT_EQ(spc_report_method(r, 3, &v, nullptr, nullptr), SPC_ERR_INVALID_INPUT);
  double x[2];
  double lam = 0.0;
  ASSERT_EQ(spc_report_witness(r, x, 2, &lam), 1);
  EXPECT_LT(lam, 0.0);
  EXPECT_EQ(spc_report_witness(r, x, 1, &lam), 0);
  char* js = nullptr;
  ASSERT_EQ(spc_report_json(r, &js), SPC_OK);
  EXPECT_NE(std::string(js).find("\"schema\": \"spc.check/1\""), std::string::npos);
  spc_string_free(js);
  spc_report_free(r);

  spc_options o;
  spc_options_default(&o);
  o.sdfp = o.sos = o.moment = 0;
  EXPECT_EQ(spc_check(a.p, b.p, &o, &r), SPC_ERR_INVALID_INPUT);
}

TEST(CApi, ProbeAndExtent) {
  Owned d{disk()};
  int outcome = -1;
  double x[2] = {9, 9};
  double margin = 0.0;
  ASSERT_EQ(spc_probe(d.p, &outcome, x, 2, &margin), SPC_OK);
  EXPECT_EQ(outcome, SPC_PROBE_NONEMPTY);
  EXPECT_GT(margin, 0.0);

  const double empty[8] = {0, 1, 1, 0, 1, 0, 0, 0};
  Owned e;
  ASSERT_EQ(spc_pencil_create(1, 2, empty, &e.p), SPC_OK);
  ASSERT_EQ(spc_probe(e.p, &outcome, nullptr, 0, nullptr), SPC_OK);
  EXPECT_EQ(outcome, SPC_PROBE_EMPTY);

  const double dir[2] = {1, 0};
  double lo = 0, hi = 0;
  ASSERT_EQ(spc_pencil_extent(d.p, dir, 2, &lo, &hi), SPC_OK);
  EXPECT_NEAR(lo, -1.0, 1e-6);
  EXPECT_NEAR(hi, 1.0, 1e-6);
  const double dir1[1] = {1};
  EXPECT_EQ(spc_pencil_extent(e.p, dir1, 1, &lo, &hi), SPC_ERR_INVALID_INPUT);
}

TEST(CApi, SubstituteFixesAPlane) {
  Owned b{ball(3, 1.0)};
  // x = (0.6, 0, 0) + u e2: the slice is |u| <= 0.8.
  const double off[3] = {0.6, 0, 0};
  const double basis[3] = {0, 1, 0};
  Owned s;
  ASSERT_EQ(spc_pencil_substitute(b.p, off, basis, 1, &s.p), SPC_OK);
  EXPECT_EQ(spc_pencil_n(s.p), 1);
  const double dir[1] = {1};
  double lo = 0, hi = 0;
  ASSERT_EQ(spc_pencil_extent(s.p, dir, 1, &lo, &hi), SPC_OK);
  EXPECT_NEAR(hi, 0.8, 1e-6);
  EXPECT_NEAR(lo, -0.8, 1e-6);
}

TEST(CApi, CircumradiusAndExport) {
  Owned e;
  ASSERT_EQ(spc_pencil_elliptope(3, &e.p), SPC_OK);
  spc_radius r;
  ASSERT_EQ(spc_circumradius(e.p, nullptr, 0, 2, nullptr, &r), SPC_OK);
  EXPECT_EQ(r.status, SPC_RADIUS_FINITE);
  EXPECT_NEAR(r.value, 3.0, 1e-3);
  const double c[2] = {0, 0};
  EXPECT_EQ(spc_circumradius(e.p, c, 2, 2, nullptr, &r), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(spc_circumradius(e.p, nullptr, 0, 0, nullptr, &r), SPC_ERR_ORDER);

  char* text = nullptr;
  ASSERT_EQ(spc_export_sdpa(e.p, nullptr, SPC_SDPA_RADIUS, 2, nullptr, &text), SPC_OK);
  EXPECT_EQ(std::string(text).rfind("* circumradius", 0), 0u);
  spc_string_free(text);
  Owned a{ball(2, 0.7)};
  Owned b{disk()};
  for (int kind : {SPC_SDPA_MOMENT, SPC_SDPA_SOS, SPC_SDPA_SDFP}) {
    ASSERT_EQ(spc_export_sdpa(a.p, b.p, kind, 2, nullptr, &text), SPC_OK) << kind;
    EXPECT_GT(std::strlen(text), 10u);
    spc_string_free(text);
  }
  EXPECT_EQ(spc_export_sdpa(a.p, b.p, 9, 2, nullptr, &text), SPC_ERR_INVALID_INPUT);
  EXPECT_EQ(spc_export_sdpa(a.p, nullptr, SPC_SDPA_SOS, 2, nullptr, &text), SPC_ERR_NULL_ARG);
}

TEST(CApi, ChoiMap) {
  std::vector<double> im(81);
  ASSERT_EQ(spc_choi_images(im.data(), im.size()), SPC_OK);
  EXPECT_EQ(spc_choi_images(im.data(), 80), SPC_ERR_INVALID_INPUT);
  double lam = 0.0;
  ASSERT_EQ(spc_map_choi_min_eig(3, 3, im.data(), &lam), SPC_OK);
  EXPECT_LT(lam, 0.0);
  Owned a, b;
  ASSERT_EQ(spc_map_pencils(3, 3, im.data(), &a.p, &b.p), SPC_OK);
  EXPECT_EQ(spc_pencil_n(a.p), 5);
  EXPECT_EQ(spc_pencil_k(b.p), 3);
  spc_value v;
  ASSERT_EQ(spc_sdfp(a.p, b.p, nullptr, &v), SPC_OK);
  EXPECT_EQ(v.verdict, SPC_REFUTED);
  EXPECT_EQ(spc_map_choi_min_eig(0, 3, im.data(), &lam), SPC_ERR_INVALID_INPUT);
}

TEST(CApi, GeneratorsAreDeterministic) {
  Owned a1, b1, a2, b2;
  ASSERT_EQ(spc_random_instance(2, 4, 4, 2.0, 5, &a1.p, &b1.p), SPC_OK);
  ASSERT_EQ(spc_random_instance(2, 4, 4, 2.0, 5, &a2.p, &b2.p), SPC_OK);
  double c1[48], c2[48];
  spc_pencil_coeffs(a1.p, c1, 48);
  spc_pencil_coeffs(a2.p, c2, 48);
  EXPECT_EQ(std::memcmp(c1, c2, sizeof c1), 0);
  Owned r;
  EXPECT_EQ(spc_pencil_random(2, 3, 0.0, 1.0, 1, &r.p), SPC_ERR_INVALID_INPUT);
  const double am[2] = {1, -1};
  const double bv[2] = {1, 1};
  ASSERT_EQ(spc_pencil_polytope(2, 1, am, bv, &r.p), SPC_OK);
  EXPECT_EQ(spc_pencil_k(r.p), 2);
}

TEST(CApi, LastErrorIsPerThread) {
  Owned d{disk()};
  double lam = 0.0;
  const double x[3] = {0, 0, 0};
  ASSERT_NE(spc_pencil_min_eig(d.p, x, 3, &lam), SPC_OK);
  const std::string here = spc_last_error();
  std::string there = "unset";
  std::thread t([&] { there = spc_last_error(); });
  t.join();
  EXPECT_FALSE(here.empty());
  EXPECT_TRUE(there.empty());
  ASSERT_EQ(spc_pencil_min_eig(d.p, x, 2, &lam), SPC_OK);
  EXPECT_STREQ(spc_last_error(), "");
}

TEST(CApi, ConcurrentSolvesAgree) {
  Owned a{ball(2, 0.7)};
  Owned b{disk()};
  std::vector<double> vals(4, 0.0);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) {
    ts.emplace_back([&, i] {
      spc_value v;
      if (spc_mu_mom(a.p, b.p, 2, nullptr, &v) == SPC_OK) vals[static_cast<std::size_t>(i)] = v.value;
    });
  }
  for (auto& t : ts) t.join();
  for (double v : vals) EXPECT_EQ(v, vals[0]);
  EXPECT_NEAR(vals[0], 0.0101, 2e-3);
}

TEST(CApi, FreeNullIsSafe) {
  spc_pencil_free(nullptr);
  spc_report_free(nullptr);
  spc_string_free(nullptr);
  spc_options_default(nullptr);
  EXPECT_EQ(spc_report_verdict(nullptr), SPC_INCONCLUSIVE);
}
