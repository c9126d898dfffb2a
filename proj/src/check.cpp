#include "spc/check.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <variant>

#include "json.hpp"

#include "spc/errors.hpp"
#include "spc/lmi.hpp"
#include "spc/posmap.hpp"
#include "spc/reduce.hpp"
#include "spc/sosrelax.hpp"

namespace spc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fill_solver(MethodRecord& m, const SdpSolution& s) {
  m.status = s.status;
  m.residuals = s.residuals;
  m.iterations = s.iterations;
}

// JSON has no infinities; encode them as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

// Walks x0 + s v outwards until B leaves the PSD cone.
std::optional<Eigen::VectorXd> lineality_witness(const LinearPencil& a, const LinearPencil& b,
                                                 const Eigen::VectorXd& v) {
  const ProbeResult pr = feasibility_probe(a);
  if (pr.outcome != ProbeOutcome::NonEmpty) return std::nullopt;
  for (double sgn : {1.0, -1.0}) {
    for (double s = 1.0; s < 1e12; s *= 2.0) {
      const Eigen::VectorXd x = pr.x + sgn * s * v;
      if (!a.contains_point(x, 1e-9)) break;
      const double lam = min_eigenvalue(b.evaluate(x));
      if (lam < -1e-9 * (1.0 + b.evaluate(x).norm())) return x;
    }
  }
  return std::nullopt;
}

}  // namespace

int CheckReport::exit_code() const {
  switch (verdict) {
    case VerdictKind::Certified: return 0;
    case VerdictKind::Refuted: return 1;
    case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["verdict"] = to_string(verdict);
  j["exit_code"] = exit_code();
  j["inputs"] = {{"n", n},         {"k", k},          {"l", l},
                 {"order", options.order}, {"r", options.r},  {"R", options.R},
                 {"tol", options.tol},     {"reduce", options.reduce},
                 {"extended_sdfp", options.extended}, {"seed", options.seed}};
  j["preprocessing"] = {{"summary", preprocessing},
                        {"lineality_removed", lineality_removed},
                        {"inner_k", inner_k},
                        {"outer_k", outer_k}};
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : methods) {
    ms.push_back({{"method", m.method},
                  {"order", m.order},
                  {"value", number(m.value)},
                  {"outcome", m.outcome},
                  {"certifies", m.certifies},
                  {"seconds", m.seconds},
                  {"note", m.note},
                  {"solver",
                   {{"status", to_string(m.status)},
                    {"iterations", m.iterations},
                    {"primal_residual", m.residuals.primal},
                    {"dual_residual", m.residuals.dual},
                    {"gap", m.residuals.gap}}}});
  }
  j["methods"] = ms;
  if (witness) {
    j["refutation"] = {{"x", std::vector<double>(witness->data(), witness->data() + witness->size())},
                       {"lambda_min", witness_eig}};
  } else {
    j["refutation"] = nullptr;
  }
  j["notes"] = notes;
  return j.dump(2);
}

CheckReport check_containment(const LinearPencil& a_in, const LinearPencil& b_in, const CheckOptions& opts) {
  if (a_in.n() != b_in.n()) {
    throw InvalidInput("inner pencil has " + std::to_string(a_in.n()) + " variables, outer pencil " +
                       std::to_string(b_in.n()));
  }
  if (opts.order < 2) throw OrderTooSmall("containment relaxations start at order 2");
  if (!opts.sdfp && !opts.sos && !opts.moment) throw InvalidInput("no method selected");
  CheckReport rep;
  rep.options = opts;
  rep.n = a_in.n();
  rep.k = a_in.k();
  rep.l = b_in.k();

  LinearPencil a = a_in;
  LinearPencil b = b_in;
  Eigen::MatrixXd to_original = Eigen::MatrixXd::Identity(a.n(), a.n());
  if (opts.reduce) {
    const ProbeResult pr = feasibility_probe(a, opts.solver);
    if (pr.outcome == ProbeOutcome::Empty) {
      rep.verdict = VerdictKind::Certified;
      rep.preprocessing = "inner spectrahedron is empty";
      rep.notes.push_back("containment holds vacuously");
      rep.inner_k = a.k();
      rep.outer_k = b.k();
      return rep;
    }
    if (pr.outcome == ProbeOutcome::Unknown) rep.notes.push_back("nonemptiness probe inconclusive");
    if (pr.outcome == ProbeOutcome::NonEmpty && pr.margin <= 0.0) {
      rep.notes.push_back("inner spectrahedron has no interior; the reduced pencil may not be strictly feasible");
    }
    const auto split = split_lineality(a, b);
    if (const auto* nc = std::get_if<NotContained>(&split)) {
      rep.preprocessing = "lineality space of the inner set is not contained in that of the outer set";
      if (auto w = lineality_witness(a, b, nc->direction)) {
        rep.verdict = VerdictKind::Refuted;
        rep.witness = *w;
        rep.witness_eig = min_eigenvalue(b.evaluate(*w));
      }
      rep.inner_k = a.k();
      rep.outer_k = b.k();
      return rep;
    }
    const auto& s = std::get<LinealitySplit>(split);
    rep.lineality_removed = a.n() - s.a.n();
    a = s.a;
    b = s.b;
    to_original = s.basis;
    a = reduced_pencil(a);
    b = reduced_pencil(b);
    rep.preprocessing = "lineality removed: " + std::to_string(rep.lineality_removed) +
                        ", inner size " + std::to_string(a_in.k()) + " -> " + std::to_string(a.k()) +
                        ", outer size " + std::to_string(b_in.k()) + " -> " + std::to_string(b.k());
  } else {
    rep.preprocessing = "none";
  }
  rep.inner_k = a.k();
  rep.outer_k = b.k();

  const ContainmentProblem cp{a, b, opts.r, opts.R};
  std::vector<Eigen::VectorXd> candidates;
  bool certified = false;
  auto run = [&](MethodRecord m, auto&& body) {
    const auto t0 = Clock::now();
    try {
      body(m);
    } catch (const NumericalFailure& e) {
      m.outcome = "inconclusive";
      m.note = e.what();
    }
    m.seconds = seconds_since(t0);
    certified = certified || m.certifies;
    rep.methods.push_back(std::move(m));
  };

  if (opts.sdfp) {
    MethodRecord rec;
    rec.method = "sdfp";
    run(rec, [&](MethodRecord& m) {
      SdfpOptions so;
      so.solver = opts.solver;
      so.tol = opts.tol;
      const SdfpResult r = cp_sdfp(a, b, opts.extended, so);
      m.value = r.margin;
      m.outcome = to_string(r.outcome);
      m.certifies = r.outcome == SdfpOutcome::Feasible;
      m.note = r.note;
      fill_solver(m, r.solution);
    });
  }
  if (opts.sos) {
    MethodRecord rec;
    rec.method = "sos";
    rec.order = std::max(0, opts.order - 2);
    run(rec, [&](MethodRecord& m) {
      LambdaSosOptions lo;
      lo.solver = opts.solver;
      lo.tol_cert = opts.tol;
      const LambdaSosResult r = lambda_sos(cp, m.order, lo);
      m.value = r.value;
      m.outcome = to_string(r.verdict.kind);
      m.certifies = r.verdict.kind == VerdictKind::Certified;
      m.note = r.verdict.note;
      fill_solver(m, r.solution);
    });
  }
  if (opts.moment) {
    MethodRecord rec;
    rec.method = "moment";
    rec.order = opts.order;
    run(rec, [&](MethodRecord& m) {
      MuMomOptions mo;
      mo.solver = opts.solver;
      mo.tol_cert = opts.tol;
      mo.samples = opts.samples;
      mo.seed = opts.seed;
      const MuMomResult r = solve_mu_mom(cp, m.order, mo);
      m.value = r.value;
      m.outcome = to_string(r.verdict.kind);
      m.certifies = r.verdict.kind == VerdictKind::Certified;
      m.note = r.verdict.note;
      fill_solver(m, r.solution);
      if (r.verdict.witness) candidates.push_back(*r.verdict.witness);
    });
  }

  std::optional<Eigen::VectorXd> w;
  if (!candidates.empty()) {
    w = candidates.front();
  } else if (!certified) {
    w = find_violation(a, b, candidates, opts.samples, opts.seed);
  }
  if (w) {
    const Eigen::VectorXd x = to_original * *w;
    const double lam = min_eigenvalue(b_in.evaluate(x));
    if (a_in.contains_point(x, 1e-9) && lam < 0.0) {
      rep.witness = x;
      rep.witness_eig = lam;
    }
  }
  if (certified && rep.witness) {
    throw InvariantViolation("a criterion certified containment but a violating point was found");
  }
  rep.verdict = certified ? VerdictKind::Certified
                          : (rep.witness ? VerdictKind::Refuted : VerdictKind::Inconclusive);
  return rep;
}

RandomInstance random_instance(const RandomInstanceOptions& opts, std::uint64_t seed) {
  if (opts.n < 1 || opts.k < 1 || opts.l < 1) throw InvalidInput("random instance needs n, k, l >= 1");
  // Seeds for A and B come from separate streams so B does not depend on
  // how many A draws were discarded.
  std::mt19937_64 sa(seed * 2 + 1);
  std::mt19937_64 sb(seed * 2 + 2);
  RandomInstance out{LinearPencil({SymMatrix::Identity(1)}), LinearPencil({SymMatrix::Identity(1)})};
  auto usable = [](const LinearPencil& p, bool need_bounded) {
    const ProbeResult pr = feasibility_probe(p);
    if (pr.outcome != ProbeOutcome::NonEmpty || pr.margin <= 0.0) return false;
    if (!need_bounded) return true;
    try {
      for (int i = 0; i < p.n(); ++i) {
        const auto [lo, hi] = extent(p, Eigen::VectorXd::Unit(p.n(), i));
        if (!std::isfinite(lo) || !std::isfinite(hi)) return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };
  RandomPencilOptions ra{opts.n, opts.k, opts.density, 1.0};
  RandomPencilOptions rb{opts.n, opts.l, opts.density, opts.b_diag};
  bool found = false;
  for (int i = 0; i < opts.max_tries && !found; ++i) {
    out.seed_a = sa();
    out.a = random_pencil(ra, out.seed_a);
    found = usable(out.a, true);
    if (!found) ++out.discarded;
  }
  if (!found) throw NumericalFailure("no bounded random inner pencil within the try budget");
  found = false;
  for (int i = 0; i < opts.max_tries && !found; ++i) {
    out.seed_b = sb();
    out.b = random_pencil(rb, out.seed_b);
    found = usable(out.b, false);
    if (!found) ++out.discarded;
  }
  if (!found) throw NumericalFailure("no random outer pencil with interior within the try budget");
  return out;
}

}  // namespace spc
