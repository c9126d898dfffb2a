#include "spc/spc.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "spc/check.hpp"
#include "spc/errors.hpp"
#include "spc/lmi.hpp"
#include "spc/momrelax.hpp"
#include "spc/pencil.hpp"
#include "spc/posmap.hpp"
#include "spc/radii.hpp"
#include "spc/sosrelax.hpp"

struct spc_pencil {
  spc::LinearPencil p;
};

struct spc_report {
  spc::CheckReport r;
};

namespace {

thread_local std::string g_last_error;

spc_status fail(spc_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Runs fn and maps the exception hierarchy onto status codes.
template <class Fn>
spc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SPC_OK;
  } catch (const spc::InvalidInput& e) {
    return fail(SPC_ERR_INVALID_INPUT, e.what());
  } catch (const spc::NumericalFailure& e) {
    return fail(SPC_ERR_NUMERICAL, e.what());
  } catch (const spc::DegeneratePencil& e) {
    return fail(SPC_ERR_DEGENERATE, e.what());
  } catch (const spc::OrderTooSmall& e) {
    return fail(SPC_ERR_ORDER, e.what());
  } catch (const spc::InvariantViolation& e) {
    return fail(SPC_ERR_INVARIANT, e.what());
  } catch (const spc::Unsupported& e) {
    return fail(SPC_ERR_UNSUPPORTED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SPC_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spc_pencil* wrap(spc::LinearPencil p) { return new spc_pencil{std::move(p)}; }

spc::CheckOptions check_options(const spc_options* o) {
  spc_options d;
  spc_options_default(&d);
  if (o == nullptr) o = &d;
  spc::CheckOptions c;
  c.sdfp = o->sdfp != 0;
  c.sos = o->sos != 0;
  c.moment = o->moment != 0;
  c.order = o->order;
  c.r = o->r;
  c.R = o->R;
  c.tol = o->tol;
  c.reduce = o->reduce != 0;
  c.extended = o->extended != 0;
  c.samples = o->samples;
  c.seed = o->seed;
  c.solver.tol_gap = o->tol_gap;
  c.solver.tol_feas = o->tol_feas;
  c.solver.max_iter = o->max_iter;
  return c;
}

int verdict_code(spc::VerdictKind v) {
  switch (v) {
    case spc::VerdictKind::Certified: return SPC_CERTIFIED;
    case spc::VerdictKind::Refuted: return SPC_REFUTED;
    case spc::VerdictKind::Inconclusive: return SPC_INCONCLUSIVE;
  }
  return SPC_INCONCLUSIVE;
}

void fill_solver(spc_value* out, const spc::SdpSolution& s) {
  out->solver_status = static_cast<int>(s.status);
  out->primal_residual = s.residuals.primal;
  out->dual_residual = s.residuals.dual;
  out->gap = s.residuals.gap;
  out->iterations = s.iterations;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd vec(const double* x, size_t len, int n) {
  if (static_cast<size_t>(n) != len) {
    throw spc::InvalidInput("vector length " + std::to_string(len) + " differs from n = " + std::to_string(n));
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = x[i];
  return v;
}

spc::ContainmentProblem problem(const spc_pencil* a, const spc_pencil* b, const spc_options* o) {
  const spc::CheckOptions c = check_options(o);
  return spc::ContainmentProblem{a->p, b->p, c.r, c.R};
}

spc::MapSpec make_map(int k, int l, const double* images) {
  if (k < 1 || l < 1) throw spc::InvalidInput("map sizes must be positive");
  std::vector<Eigen::MatrixXd> ims;
  for (int u = 0; u < k * k; ++u) {
    Eigen::MatrixXd m(l, l);
    for (int r = 0; r < l; ++r) {
      for (int s = 0; s < l; ++s) m(r, s) = images[(static_cast<size_t>(u) * l + r) * l + s];
    }
    ims.push_back(std::move(m));
  }
  return spc::MapSpec(k, l, std::move(ims));
}

}  // namespace

extern "C" {

const char* spc_version(void) { return "1.0.0"; }

const char* spc_last_error(void) { return g_last_error.c_str(); }

const char* spc_status_name(spc_status s) {
  switch (s) {
    case SPC_OK: return "ok";
    case SPC_ERR_INVALID_INPUT: return "invalid input";
    case SPC_ERR_NUMERICAL: return "numerical failure";
    case SPC_ERR_DEGENERATE: return "degenerate pencil";
    case SPC_ERR_ORDER: return "order too small";
    case SPC_ERR_INVARIANT: return "invariant violation";
    case SPC_ERR_UNSUPPORTED: return "unsupported";
    case SPC_ERR_INTERNAL: return "internal error";
    case SPC_ERR_NULL_ARG: return "null argument";
  }
  return "unknown status";
}

void spc_string_free(char* s) { delete[] s; }

spc_status spc_pencil_create(int n, int k, const double* coeffs, spc_pencil** out) {
  if (coeffs == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_create: null argument");
  return guarded([&] {
    if (n < 0 || k < 1) throw spc::InvalidInput("pencil needs n >= 0 and k >= 1");
    std::vector<spc::SymMatrix> c;
    for (int p = 0; p <= n; ++p) {
      Eigen::MatrixXd m(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) m(i, j) = coeffs[(static_cast<size_t>(p) * k + i) * k + j];
      }
      // Same rule as the JSON reader.
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw spc::InvalidInput("coefficient " + std::to_string(p) + " is not symmetric");
      }
      c.emplace_back(m);
    }
    *out = wrap(spc::LinearPencil(std::move(c)));
  });
}

spc_status spc_pencil_from_json(const char* text, spc_pencil** out) {
  if (text == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_from_json: null argument");
  return guarded([&] { *out = wrap(spc::pencil_from_json(text)); });
}

spc_status spc_pencil_read(const char* path, spc_pencil** out) {
  if (path == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_read: null argument");
  return guarded([&] { *out = wrap(spc::read_pencil_file(path)); });
}

spc_status spc_pencil_write(const spc_pencil* p, const char* path) {
  if (p == nullptr || path == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_write: null argument");
  return guarded([&] { spc::write_pencil_file(p->p, path); });
}

spc_status spc_pencil_to_json(const spc_pencil* p, char** out) {
  if (p == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_to_json: null argument");
  return guarded([&] { *out = dup_string(spc::pencil_to_json(p->p)); });
}

void spc_pencil_free(spc_pencil* p) { delete p; }

int spc_pencil_n(const spc_pencil* p) { return p == nullptr ? -1 : p->p.n(); }

int spc_pencil_k(const spc_pencil* p) { return p == nullptr ? -1 : p->p.k(); }

spc_status spc_pencil_coeffs(const spc_pencil* p, double* out, size_t len) {
  if (p == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_coeffs: null argument");
  const int n = p->p.n();
  const int k = p->p.k();
  const size_t need = static_cast<size_t>(n + 1) * k * k;
  if (len < need) return fail(SPC_ERR_INVALID_INPUT, "spc_pencil_coeffs: buffer too small");
  for (int q = 0; q <= n; ++q) {
    const Eigen::MatrixXd& m = p->p.coeff(q).matrix();
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) out[(static_cast<size_t>(q) * k + i) * k + j] = m(i, j);
    }
  }
  g_last_error.clear();
  return SPC_OK;
}

spc_status spc_pencil_min_eig(const spc_pencil* p, const double* x, size_t len, double* out) {
  if (p == nullptr || out == nullptr || (x == nullptr && len > 0)) {
    return fail(SPC_ERR_NULL_ARG, "spc_pencil_min_eig: null argument");
  }
  return guarded([&] { *out = spc::min_eigenvalue(p->p.evaluate(vec(x, len, p->p.n()))); });
}

spc_status spc_pencil_scaled(const spc_pencil* p, double nu, spc_pencil** out) {
  if (p == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_scaled: null argument");
  return guarded([&] { *out = wrap(p->p.scaled(nu)); });
}

spc_status spc_pencil_substitute(const spc_pencil* p, const double* offset, const double* basis, int m,
                                 spc_pencil** out) {
  if (p == nullptr || offset == nullptr || out == nullptr || (basis == nullptr && m > 0)) {
    return fail(SPC_ERR_NULL_ARG, "spc_pencil_substitute: null argument");
  }
  return guarded([&] {
    if (m < 0) throw spc::InvalidInput("substitute: negative column count");
    const int n = p->p.n();
    Eigen::MatrixXd v(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) v(i, j) = basis[static_cast<size_t>(i) * m + j];
    }
    *out = wrap(p->p.substitute(vec(offset, static_cast<size_t>(n), n), v));
  });
}

spc_status spc_pencil_extent(const spc_pencil* p, const double* dir, size_t len, double* lo, double* hi) {
  if (p == nullptr || dir == nullptr || lo == nullptr || hi == nullptr) {
    return fail(SPC_ERR_NULL_ARG, "spc_pencil_extent: null argument");
  }
  return guarded([&] {
    const auto e = spc::extent(p->p, vec(dir, len, p->p.n()));
    *lo = e.first;
    *hi = e.second;
  });
}

spc_status spc_pencil_ball(int n, double radius, spc_pencil** out) {
  if (out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_ball: null argument");
  return guarded([&] { *out = wrap(spc::ball_pencil(n, radius)); });
}

spc_status spc_pencil_elliptope(int k, spc_pencil** out) {
  if (out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_elliptope: null argument");
  return guarded([&] { *out = wrap(spc::elliptope_pencil(k)); });
}

spc_status spc_pencil_polytope(int m, int n, const double* a, const double* b, spc_pencil** out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return fail(SPC_ERR_NULL_ARG, "spc_pencil_polytope: null argument");
  }
  return guarded([&] {
    if (m < 1 || n < 0) throw spc::InvalidInput("polytope needs m >= 1 and n >= 0");
    Eigen::MatrixXd am(m, n);
    Eigen::VectorXd bv(m);
    for (int i = 0; i < m; ++i) {
      bv(i) = b[i];
      for (int j = 0; j < n; ++j) am(i, j) = a[static_cast<size_t>(i) * n + j];
    }
    *out = wrap(spc::polytope_pencil(am, bv));
  });
}

spc_status spc_pencil_random(int n, int k, double density, double diag0, uint64_t seed, spc_pencil** out) {
  if (out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_pencil_random: null argument");
  return guarded([&] { *out = wrap(spc::random_pencil({n, k, density, diag0}, seed)); });
}

spc_status spc_random_instance(int n, int k, int l, double b_diag, uint64_t seed, spc_pencil** a,
                               spc_pencil** b) {
  if (a == nullptr || b == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_random_instance: null argument");
  return guarded([&] {
    spc::RandomInstanceOptions o;
    o.n = n;
    o.k = k;
    o.l = l;
    o.b_diag = b_diag;
    spc::RandomInstance inst = spc::random_instance(o, seed);
    *a = wrap(std::move(inst.a));
    *b = wrap(std::move(inst.b));
  });
}

spc_status spc_choi_images(double* out, size_t len) {
  if (out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_choi_images: null argument");
  if (len < 81) return fail(SPC_ERR_INVALID_INPUT, "spc_choi_images: buffer needs 81 doubles");
  const spc::MapSpec m = spc::choi_type_map();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Eigen::MatrixXd& im = m.unit_image(i, j);
      for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) out[((i * 3 + j) * 3 + r) * 3 + s] = im(r, s);
      }
    }
  }
  g_last_error.clear();
  return SPC_OK;
}

spc_status spc_map_pencils(int k, int l, const double* images, spc_pencil** a, spc_pencil** b) {
  if (images == nullptr || a == nullptr || b == nullptr) {
    return fail(SPC_ERR_NULL_ARG, "spc_map_pencils: null argument");
  }
  return guarded([&] {
    auto [pa, pb] = spc::map_to_pencils(make_map(k, l, images));
    *a = wrap(std::move(pa));
    *b = wrap(std::move(pb));
  });
}

spc_status spc_map_choi_min_eig(int k, int l, const double* images, double* out) {
  if (images == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_map_choi_min_eig: null argument");
  return guarded([&] { *out = spc::min_eigenvalue(spc::choi_matrix(make_map(k, l, images))); });
}

void spc_options_default(spc_options* o) {
  if (o == nullptr) return;
  const spc::CheckOptions c;
  o->sdfp = c.sdfp;
  o->sos = c.sos;
  o->moment = c.moment;
  o->order = c.order;
  o->r = c.r;
  o->R = c.R;
  o->tol = c.tol;
  o->reduce = c.reduce;
  o->extended = c.extended;
  o->samples = c.samples;
  o->seed = c.seed;
  o->tol_gap = c.solver.tol_gap;
  o->tol_feas = c.solver.tol_feas;
  o->max_iter = c.solver.max_iter;
}

spc_status spc_probe(const spc_pencil* p, int* outcome, double* x, size_t len, double* margin) {
  if (p == nullptr || outcome == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_probe: null argument");
  return guarded([&] {
    const spc::ProbeResult r = spc::feasibility_probe(p->p);
    *outcome = r.outcome == spc::ProbeOutcome::NonEmpty ? SPC_PROBE_NONEMPTY
               : r.outcome == spc::ProbeOutcome::Empty  ? SPC_PROBE_EMPTY
                                                        : SPC_PROBE_UNKNOWN;
    if (margin != nullptr) *margin = r.margin;
    if (x != nullptr && r.outcome == spc::ProbeOutcome::NonEmpty) {
      if (len < static_cast<size_t>(r.x.size())) throw spc::InvalidInput("spc_probe: buffer too small");
      for (Eigen::Index i = 0; i < r.x.size(); ++i) x[i] = r.x(i);
    }
  });
}

spc_status spc_mu_mom(const spc_pencil* a, const spc_pencil* b, int t, const spc_options* opts,
                      spc_value* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_mu_mom: null argument");
  return guarded([&] {
    const spc::CheckOptions c = check_options(opts);
    spc::MuMomOptions mo;
    mo.solver = c.solver;
    mo.tol_cert = c.tol;
    mo.samples = c.samples;
    mo.seed = c.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const spc::MuMomResult r = spc::solve_mu_mom(problem(a, b, opts), t, mo);
    *out = spc_value{};
    out->seconds = elapsed(t0);
    out->value = r.value;
    out->verdict = verdict_code(r.verdict.kind);
    fill_solver(out, r.solution);
  });
}

spc_status spc_lambda_sos(const spc_pencil* a, const spc_pencil* b, int t, const spc_options* opts,
                          spc_value* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return fail(SPC_ERR_NULL_ARG, "spc_lambda_sos: null argument");
  }
  return guarded([&] {
    const spc::CheckOptions c = check_options(opts);
    spc::LambdaSosOptions lo;
    lo.solver = c.solver;
    lo.tol_cert = c.tol;
    const auto t0 = std::chrono::steady_clock::now();
    const spc::LambdaSosResult r = spc::lambda_sos(problem(a, b, opts), t, lo);
    *out = spc_value{};
    out->seconds = elapsed(t0);
    out->value = r.value;
    out->verdict = verdict_code(r.verdict.kind);
    fill_solver(out, r.solution);
  });
}

spc_status spc_sdfp(const spc_pencil* a, const spc_pencil* b, const spc_options* opts, spc_value* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_sdfp: null argument");
  return guarded([&] {
    const spc::CheckOptions c = check_options(opts);
    spc::SdfpOptions so;
    so.solver = c.solver;
    so.tol = c.tol;
    const auto t0 = std::chrono::steady_clock::now();
    const spc::SdfpResult r = spc::cp_sdfp(a->p, b->p, c.extended, so);
    *out = spc_value{};
    out->seconds = elapsed(t0);
    out->value = r.margin;
    out->verdict = r.outcome == spc::SdfpOutcome::Feasible     ? SPC_CERTIFIED
                   : r.outcome == spc::SdfpOutcome::Infeasible ? SPC_REFUTED
                                                               : SPC_INCONCLUSIVE;
    fill_solver(out, r.solution);
  });
}

spc_status spc_circumradius(const spc_pencil* p, const double* center, size_t len, int t,
                            const spc_options* opts, spc_radius* out) {
  if (p == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_circumradius: null argument");
  return guarded([&] {
    const int n = p->p.n();
    const Eigen::VectorXd c = center == nullptr ? Eigen::VectorXd::Zero(n) : vec(center, len, n);
    const auto t0 = std::chrono::steady_clock::now();
    const spc::RadiusResult r = spc::circumradius_sq(p->p, c, t, check_options(opts).solver);
    *out = spc_radius{};
    out->seconds = elapsed(t0);
    out->status = r.status == spc::RadiusStatus::Finite      ? SPC_RADIUS_FINITE
                  : r.status == spc::RadiusStatus::Unbounded ? SPC_RADIUS_UNBOUNDED
                                                             : SPC_RADIUS_EMPTY;
    out->value = r.value;
    out->solver_status = static_cast<int>(r.solution.status);
    out->primal_residual = r.solution.residuals.primal;
    out->dual_residual = r.solution.residuals.dual;
    out->gap = r.solution.residuals.gap;
  });
}

spc_status spc_export_sdpa(const spc_pencil* a, const spc_pencil* b, int kind, int t, const spc_options* opts,
                           char** out) {
  if (a == nullptr || out == nullptr || (b == nullptr && kind != SPC_SDPA_RADIUS)) {
    return fail(SPC_ERR_NULL_ARG, "spc_export_sdpa: null argument");
  }
  return guarded([&] {
    spc::SdpProblem sdp;
    switch (kind) {
      case SPC_SDPA_MOMENT:
        sdp = spc::build_containment_relaxation(problem(a, b, opts), t).sdp;
        break;
      case SPC_SDPA_SOS:
        sdp = spc::build_sos_relaxation(problem(a, b, opts), t).sdp;
        break;
      case SPC_SDPA_SDFP:
        sdp = spc::sdfp_problem(a->p, b->p, check_options(opts).extended);
        break;
      case SPC_SDPA_RADIUS:
        sdp = spc::circumradius_problem(a->p, Eigen::VectorXd::Zero(a->p.n()), t);
        break;
      default:
        throw spc::InvalidInput("spc_export_sdpa: unknown problem kind " + std::to_string(kind));
    }
    *out = dup_string(spc::export_sdpa(sdp));
  });
}

spc_status spc_check(const spc_pencil* a, const spc_pencil* b, const spc_options* opts, spc_report** out) {
  if (a == nullptr || b == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_check: null argument");
  return guarded([&] { *out = new spc_report{spc::check_containment(a->p, b->p, check_options(opts))}; });
}

int spc_report_verdict(const spc_report* r) {
  return r == nullptr ? SPC_INCONCLUSIVE : verdict_code(r->r.verdict);
}

int spc_report_exit_code(const spc_report* r) { return r == nullptr ? 2 : r->r.exit_code(); }

spc_status spc_report_json(const spc_report* r, char** out) {
  if (r == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_report_json: null argument");
  return guarded([&] { *out = dup_string(r->r.to_json()); });
}

size_t spc_report_method_count(const spc_report* r) { return r == nullptr ? 0 : r->r.methods.size(); }

spc_status spc_report_method(const spc_report* r, size_t i, spc_value* out, const char** name, int* order) {
  if (r == nullptr || out == nullptr) return fail(SPC_ERR_NULL_ARG, "spc_report_method: null argument");
  if (i >= r->r.methods.size()) return fail(SPC_ERR_INVALID_INPUT, "spc_report_method: index out of range");
  const spc::MethodRecord& m = r->r.methods[i];
  *out = spc_value{};
  out->value = m.value;
  out->verdict = m.certifies ? SPC_CERTIFIED : (m.outcome == "infeasible" || m.outcome == "refuted")
                                                   ? SPC_REFUTED
                                                   : SPC_INCONCLUSIVE;
  out->solver_status = static_cast<int>(m.status);
  out->primal_residual = m.residuals.primal;
  out->dual_residual = m.residuals.dual;
  out->gap = m.residuals.gap;
  out->iterations = m.iterations;
  out->seconds = m.seconds;
  if (name != nullptr) *name = m.method.c_str();
  if (order != nullptr) *order = m.order;
  g_last_error.clear();
  return SPC_OK;
}

int spc_report_witness(const spc_report* r, double* x, size_t len, double* lambda_min) {
  if (r == nullptr || !r->r.witness) return 0;
  const Eigen::VectorXd& w = *r->r.witness;
  if (x != nullptr) {
    if (len < static_cast<size_t>(w.size())) return 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) x[i] = w(i);
  }
  if (lambda_min != nullptr) *lambda_min = r->r.witness_eig;
  return 1;
}

void spc_report_free(spc_report* r) { delete r; }

}  // extern "C"
