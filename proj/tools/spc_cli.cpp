// Command-line front end. Talks to the library only through spc.h.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "common.hpp"

namespace cli {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Failure(kExitInput, "not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw Failure(kExitInput, "not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

namespace {

struct CheckArgs {
  std::string a, b, method = "all", out;
  int order = 2;
  double r = 1.0, R = 2.0, tol = 1e-7;
  bool reduce = true;
  bool plain_sdfp = false;
  int samples = 2000;
  std::uint64_t seed = 1;
  bool json = false;
};

spc_options options_from(const CheckArgs& c) {
  spc_options o;
  spc_options_default(&o);
  o.sdfp = c.method == "sdfp" || c.method == "all";
  o.moment = c.method == "moment" || c.method == "all";
  o.sos = c.method == "sos" || c.method == "all";
  o.order = c.order;
  o.r = c.r;
  o.R = c.R;
  o.tol = c.tol;
  o.reduce = c.reduce;
  o.extended = !c.plain_sdfp;
  o.samples = c.samples;
  o.seed = c.seed;
  return o;
}

void print_report(const spc_report* rep, int n) {
  const std::size_t m = spc_report_method_count(rep);
  for (std::size_t i = 0; i < m; ++i) {
    spc_value v;
    const char* name = nullptr;
    int order = 0;
    ok(spc_report_method(rep, i, &v, &name, &order), "report");
    std::string label = name;
    const bool sdfp = label == "sdfp";
    if (!sdfp) label += "(" + std::to_string(order) + ")";
    const char* outcome = verdict_name(v.verdict);
    if (sdfp) outcome = v.verdict == SPC_CERTIFIED ? "feasible" : v.verdict == SPC_REFUTED ? "infeasible" : "inconclusive";
    std::printf("  %-10s value % .6g  %-12s solver %s  res %.1e/%.1e/%.1e  %.2fs\n", label.c_str(), v.value,
                outcome, solver_name(v.solver_status), v.primal_residual, v.dual_residual, v.gap,
                v.seconds);
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  double lam = 0.0;
  if (spc_report_witness(rep, x.data(), x.size(), &lam)) {
    std::printf("  witness x = (");
    for (int i = 0; i < n; ++i) std::printf("%s%.6g", i ? ", " : "", x[static_cast<std::size_t>(i)]);
    std::printf("), lambda_min(B(x)) = %.6g\n", lam);
  }
  std::printf("verdict: %s\n", verdict_name(spc_report_verdict(rep)));
}

int cmd_check(const CheckArgs& c) {
  Pencil a = read_pencil(c.a);
  Pencil b = read_pencil(c.b);
  const spc_options o = options_from(c);
  spc_report* raw = nullptr;
  ok(spc_check(a.get(), b.get(), &o, &raw), "check");
  Report rep(raw);
  char* js = nullptr;
  ok(spc_report_json(rep.get(), &js), "report");
  const std::string text = take(js);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Failure(kExitInput, "cannot write " + c.out);
    f << text << "\n";
  }
  if (c.json) {
    std::printf("%s\n", text.c_str());
  } else {
    print_report(rep.get(), spc_pencil_n(a.get()));
  }
  return spc_report_exit_code(rep.get());
}

int cmd_radius(const std::string& path, int order, const std::string& center) {
  Pencil p = read_pencil(path);
  std::vector<double> c;
  if (!center.empty()) c = parse_list(center);
  spc_radius r;
  ok(spc_circumradius(p.get(), c.empty() ? nullptr : c.data(), c.size(), order, nullptr, &r), "radius");
  switch (r.status) {
    case SPC_RADIUS_FINITE:
      std::printf("nu^2(%d) = %.6f\n", order, r.value);
      std::printf("bounded: ||x - c||^2 <= %lld on the spectrahedron\n",
                  static_cast<long long>(std::ceil(std::max(0.0, r.value - 1e-6))));
      std::printf("(a squared circumradius bound only if the set is centrally symmetric about c)\n");
      break;
    case SPC_RADIUS_UNBOUNDED:
      std::printf("nu^2(%d) = inf (relaxation unbounded; boundedness unknown at this order)\n", order);
      break;
    default:
      std::printf("spectrahedron is empty\n");
      break;
  }
  std::printf("solver %s, residuals %.1e/%.1e/%.1e, %.2fs\n", solver_name(r.solver_status), r.primal_residual,
              r.dual_residual, r.gap, r.seconds);
  return 0;
}

int cmd_gen(int n, int k, int l, std::uint64_t seed, double b_diag, const std::string& out_a,
            const std::string& out_b) {
  spc_pencil* ra = nullptr;
  spc_pencil* rb = nullptr;
  ok(spc_random_instance(n, k, l, b_diag, seed, &ra, &rb), "gen");
  Pencil a(ra);
  Pencil b(rb);
  write_pencil(a.get(), out_a);
  write_pencil(b.get(), out_b);
  std::printf("wrote %s (n=%d, k=%d) and %s (l=%d)\n", out_a.c_str(), n, k, out_b.c_str(), l);
  return 0;
}

int cmd_export(const std::string& a_path, const std::string& b_path, const std::string& kind, int order,
               double r, double R, const std::string& out) {
  static const std::vector<std::pair<std::string, int>> kinds = {
      {"moment", SPC_SDPA_MOMENT}, {"sos", SPC_SDPA_SOS}, {"sdfp", SPC_SDPA_SDFP}, {"radius", SPC_SDPA_RADIUS}};
  int k = -1;
  for (const auto& [name, code] : kinds) {
    if (name == kind) k = code;
  }
  Pencil a = read_pencil(a_path);
  Pencil b;
  if (k != SPC_SDPA_RADIUS) {
    if (b_path.empty()) throw Failure(kExitInput, "export --kind " + kind + " needs --b");
    b = read_pencil(b_path);
  }
  spc_options o;
  spc_options_default(&o);
  o.r = r;
  o.R = R;
  char* text = nullptr;
  ok(spc_export_sdpa(a.get(), b.get(), k, order, &o, &text), "export");
  const std::string s = take(text);
  if (out.empty() || out == "-") {
    std::fputs(s.c_str(), stdout);
  } else {
    std::ofstream f(out);
    if (!f) throw Failure(kExitInput, "cannot write " + out);
    f << s;
  }
  return 0;
}

// {"k": 3, "l": 3, "images": [[l*l row-major] for E_11, E_12, ..., E_kk]}
std::vector<double> read_map(const std::string& path, int& k, int& l) {
  std::ifstream f(path);
  if (!f) throw Failure(kExitInput, "cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
    k = j.at("k").get<int>();
    l = j.at("l").get<int>();
    std::vector<double> out;
    const auto& ims = j.at("images");
    if (!ims.is_array() || ims.size() != static_cast<std::size_t>(k * k)) {
      throw Failure(kExitInput, path + ": images must hold k*k matrices");
    }
    for (const auto& im : ims) {
      const auto v = im.get<std::vector<double>>();
      if (v.size() != static_cast<std::size_t>(l * l)) throw Failure(kExitInput, path + ": image needs l*l entries");
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Failure(kExitInput, path + ": " + e.what());
  }
}

int cmd_map(const std::string& builtin, const std::string& path, CheckArgs c) {
  int k = 3;
  int l = 3;
  std::vector<double> images;
  if (!path.empty()) {
    images = read_map(path, k, l);
  } else if (builtin == "choi") {
    images.resize(81);
    ok(spc_choi_images(images.data(), images.size()), "choi map");
  } else {
    throw Failure(kExitInput, "map needs --map <file> or --builtin choi");
  }
  double choi = 0.0;
  ok(spc_map_choi_min_eig(k, l, images.data(), &choi), "choi matrix");
  std::printf("Choi matrix lambda_min = %.6g (%s)\n", choi,
              choi >= -1e-9 ? "completely positive" : "not completely positive");
  spc_pencil* ra = nullptr;
  spc_pencil* rb = nullptr;
  ok(spc_map_pencils(k, l, images.data(), &ra, &rb), "map pencils");
  Pencil a(ra);
  Pencil b(rb);
  const spc_options o = options_from(c);
  spc_report* raw = nullptr;
  ok(spc_check(a.get(), b.get(), &o, &raw), "positivity check");
  Report rep(raw);
  std::printf("positivity as containment (n=%d, k=%d, l=%d):\n", spc_pencil_n(a.get()), spc_pencil_k(a.get()),
              spc_pencil_k(b.get()));
  print_report(rep.get(), spc_pencil_n(a.get()));
  if (!c.out.empty()) {
    char* js = nullptr;
    ok(spc_report_json(rep.get(), &js), "report");
    std::ofstream f(c.out);
    f << take(js) << "\n";
  }
  return spc_report_exit_code(rep.get());
}

void add_check_flags(CLI::App* cmd, CheckArgs& c) {
  cmd->add_option("--method", c.method, "sdfp, moment, sos or all")
      ->check(CLI::IsMember({"sdfp", "moment", "sos", "all"}));
  cmd->add_option("--order", c.order, "moment order t; sos uses t-2")->check(CLI::Range(2, 20));
  cmd->add_option("--r", c.r, "inner annulus radius")->check(CLI::PositiveNumber);
  cmd->add_option("--R", c.R, "outer annulus radius")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "certification tolerance")->check(CLI::PositiveNumber);
  cmd->add_flag("--reduce,!--no-reduce", c.reduce, "reduce pencils and split lineality spaces first");
  cmd->add_flag("--plain-sdfp", c.plain_sdfp, "SDFP on A itself instead of 1 (+) A");
  cmd->add_option("--samples", c.samples, "boundary samples in the violation search");
  cmd->add_option("--seed", c.seed, "seed of the violation search");
  cmd->add_option("--out", c.out, "write the JSON report here");
  cmd->add_flag("--json", c.json, "print the JSON report instead of the summary");
}

}  // namespace
}  // namespace cli

int main(int argc, char** argv) {
  using namespace cli;
  CLI::App app{"Spectrahedral containment: certificates, radii and reproductions"};
  app.set_version_flag("--version", std::string(spc_version()));
  app.require_subcommand(1);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "decide S_A in S_B (exit 0 certified, 1 refuted, 2 inconclusive)");
  c_check->add_option("--a", check.a, "inner pencil (JSON)")->required();
  c_check->add_option("--b", check.b, "outer pencil (JSON)")->required();
  add_check_flags(c_check, check);

  std::string rad_pencil, rad_center;
  int rad_order = 2;
  auto* c_radius = app.add_subcommand("radius", "moment upper bound on the squared circumradius");
  c_radius->add_option("--pencil", rad_pencil, "pencil (JSON)")->required();
  c_radius->add_option("--order", rad_order, "relaxation order")->check(CLI::Range(1, 20));
  c_radius->add_option("--center", rad_center, "comma-separated centre, default origin");

  int gn = 2, gk = 4, gl = 4;
  std::uint64_t gseed = 1;
  double gdiag = 2.0;
  std::string gout_a = "a.json", gout_b = "b.json";
  auto* c_gen = app.add_subcommand("gen", "random pencil pair (seeded)");
  c_gen->add_option("--n", gn, "variables")->check(CLI::Range(1, 50));
  c_gen->add_option("--k", gk, "inner pencil size")->check(CLI::Range(1, 100));
  c_gen->add_option("--l", gl, "outer pencil size")->check(CLI::Range(1, 100));
  c_gen->add_option("--seed", gseed, "seed");
  c_gen->add_option("--b-diag", gdiag, "diagonal of B_0")->check(CLI::PositiveNumber);
  c_gen->add_option("--out-a", gout_a, "inner pencil file");
  c_gen->add_option("--out-b", gout_b, "outer pencil file");

  std::string ra, rb, rout = "render.svg", rmode = "slice", raxis1, raxis2, rat;
  std::vector<int> rplane{0, 1};
  std::vector<double> rrange;
  int rgrid = 0;
  auto* c_render = app.add_subcommand("render", "SVG of S_A (light) over S_B (dark)");
  c_render->add_option("--a", ra, "inner pencil (JSON)")->required();
  c_render->add_option("--b", rb, "outer pencil (JSON)")->required();
  c_render->add_option("--out", rout, "SVG file");
  c_render->add_option("--plane", rplane, "coordinate plane i j (0-based)")->expected(2);
  c_render->add_option("--mode", rmode, "slice or project")->check(CLI::IsMember({"slice", "project"}));
  c_render->add_option("--grid", rgrid, "pixels per side (default 160 slice, 60 project)")
      ->check(CLI::Range(2, 2000));
  c_render->add_option("--axis1", raxis1, "horizontal axis as comma-separated weights");
  c_render->add_option("--axis2", raxis2, "vertical axis as comma-separated weights");
  c_render->add_option("--at", rat, "base point of the slice (comma-separated)");
  c_render->add_option("--range", rrange, "xmin xmax ymin ymax")->expected(4);

  std::string ea, eb, ekind = "moment", eout;
  int eorder = 2;
  double er = 1.0, eR = 2.0;
  auto* c_export = app.add_subcommand("export", "write a relaxation in SDPA sparse format");
  c_export->add_option("--a", ea, "inner pencil, or the pencil for --kind radius")->required();
  c_export->add_option("--b", eb, "outer pencil");
  c_export->add_option("--kind", ekind, "moment, sos, sdfp or radius")
      ->check(CLI::IsMember({"moment", "sos", "sdfp", "radius"}));
  c_export->add_option("--order", eorder, "relaxation order");
  c_export->add_option("--r", er, "inner annulus radius");
  c_export->add_option("--R", eR, "outer annulus radius");
  c_export->add_option("--out", eout, ".dat-s file, default stdout");

  std::string mbuiltin, mpath;
  CheckArgs mcheck;
  auto* c_map = app.add_subcommand("map", "positivity of a linear map via containment");
  c_map->add_option("--builtin", mbuiltin, "builtin map")->check(CLI::IsMember({"choi"}));
  c_map->add_option("--map", mpath, "map file {k, l, images}");
  add_check_flags(c_map, mcheck);

  int table = 1, jobs = 0;
  std::string scale = "desk", tout;
  auto* c_repro = app.add_subcommand("reproduce", "recompute a results table as CSV");
  c_repro->add_option("--table", table, "1, 2, 3 or 4")->required()->check(CLI::Range(1, 4));
  c_repro->add_option("--scale", scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));
  c_repro->add_option("--out", tout, "CSV file, default stdout");
  c_repro->add_option("--jobs", jobs, "parallel rows, default all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*c_check) return cmd_check(check);
    if (*c_radius) return cmd_radius(rad_pencil, rad_order, rad_center);
    if (*c_gen) return cmd_gen(gn, gk, gl, gseed, gdiag, gout_a, gout_b);
    if (*c_render) return run_render(ra, rb, rout, rplane[0], rplane[1], rmode, rgrid, raxis1, raxis2, rat, rrange);
    if (*c_export) return cmd_export(ea, eb, ekind, eorder, er, eR, eout);
    if (*c_map) return cmd_map(mbuiltin, mpath, mcheck);
    if (*c_repro) return run_reproduce(table, scale, tout, jobs);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.what());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
