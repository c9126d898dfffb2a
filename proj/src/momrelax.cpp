#include "spc/momrelax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "spc/errors.hpp"
#include "spc/lmi.hpp"

namespace spc {

Eigen::MatrixXd SymbolicMatrix::evaluate(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = apply(at(i, j), y);
  }
  return m;
}

SymbolicMatrix moment_matrix_structure(const std::vector<Exponent>& rows,
                                       const MonomialBasis& moments) {
  SymbolicMatrix s;
  s.dim = static_cast<int>(rows.size());
  s.entries.resize(rows.size() * rows.size());
  for (int i = 0; i < s.dim; ++i) {
    for (int j = 0; j < s.dim; ++j) {
      const int idx = moments.find(add(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]));
      if (idx < 0) throw InvalidInput("moment matrix exceeds the moment basis degree");
      s.entries[static_cast<std::size_t>(i * s.dim + j)] = {{idx, 1.0}};
    }
  }
  return s;
}

SymbolicMatrix moment_matrix_structure(const MonomialBasis& basis, const MonomialBasis& moments) {
  return moment_matrix_structure(basis.monomials(), moments);
}

SymbolicMatrix localizing_matrix_structure(const PolyMatrix& g, const std::vector<Exponent>& rows,
                                           const MonomialBasis& moments) {
  if (g.vars() != moments.vars()) throw InvalidInput("localizing matrix: variable count mismatch");
  const int s = g.dim();
  const int nr = static_cast<int>(rows.size());
  SymbolicMatrix out;
  out.dim = nr * s;
  out.entries.resize(static_cast<std::size_t>(out.dim) * static_cast<std::size_t>(out.dim));
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < nr; ++b) {
      const Exponent ab = add(rows[static_cast<std::size_t>(a)], rows[static_cast<std::size_t>(b)]);
      for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
          LinearForm f;
          for (const auto& [e, c] : g.at(i, j).terms()) {
            const int idx = moments.find(add(ab, e));
            if (idx < 0) throw InvalidInput("localizing matrix exceeds the moment basis degree");
            f.emplace_back(idx, c);
          }
          std::sort(f.begin(), f.end());
          out.entries[static_cast<std::size_t>((a * s + i) * out.dim + b * s + j)] = std::move(f);
        }
      }
    }
  }
  return out;
}

SymbolicMatrix localizing_matrix_structure(const PolyMatrix& g, const MonomialBasis& basis,
                                           const MonomialBasis& moments) {
  return localizing_matrix_structure(g, basis.monomials(), moments);
}

Eigen::VectorXd MomentRelaxation::moment_vector(const Eigen::VectorXd& sdp_y) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(moments.size());
  y(0) = 1.0;
  for (int i = 0; i < moments.size(); ++i) {
    const int s = sdp_index[static_cast<std::size_t>(i)];
    if (s >= 0) y(i) = sdp_y(s);
  }
  return y;
}

Eigen::VectorXd MomentRelaxation::sdp_vector(const Eigen::VectorXd& moment_y) const {
  Eigen::VectorXd s(sdp.num_constraints());
  for (int i = 0; i < moments.size(); ++i) {
    const int k = sdp_index[static_cast<std::size_t>(i)];
    if (k >= 0) s(k) = moment_y(i);
  }
  return s;
}

double MomentRelaxation::min_block_eigenvalue(const Eigen::VectorXd& moment_y) const {
  const Eigen::VectorXd y = sdp_vector(moment_y);
  auto blocks = to_dense(sdp, sdp.objective);
  for (auto& b : blocks) b = -b;
  for (int i = 0; i < sdp.num_constraints(); ++i) {
    const auto dense = to_dense(sdp, sdp.constraints[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k] += y(i) * dense[k];
  }
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) lo = std::min(lo, min_eigenvalue(SymMatrix(b)));
  return lo;
}

namespace {

int parity(const Exponent& e, const std::vector<int>& mask) {
  int s = 0;
  for (int v : mask) s += e[static_cast<std::size_t>(v)];
  return s % 2;
}

void require_even(const Polynomial& p, const std::vector<int>& mask) {
  for (const auto& [e, c] : p.terms()) {
    if (parity(e, mask) != 0) {
      throw InvalidInput("sign symmetry requested but the problem is not invariant");
    }
  }
}

// Rows of a degree-t basis grouped by parity (a single group without symmetry).
std::vector<std::vector<Exponent>> row_groups(int vars, int t, const std::vector<int>& mask) {
  const MonomialBasis basis(vars, t);
  if (mask.empty()) return {basis.monomials()};
  std::vector<std::vector<Exponent>> groups(2);
  for (const auto& e : basis.monomials()) groups[static_cast<std::size_t>(parity(e, mask))].push_back(e);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

void add_block(MomentRelaxation& rel, const SymbolicMatrix& s) {
  const int blk = static_cast<int>(rel.sdp.block_sizes.size());
  rel.sdp.block_sizes.push_back(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    for (int j = i; j < s.dim; ++j) {
      for (const auto& [idx, c] : s.at(i, j)) {
        if (idx == 0) {
          rel.sdp.objective.push_back({blk, i, j, -c});
          continue;
        }
        const int v = rel.sdp_index[static_cast<std::size_t>(idx)];
        if (v >= 0) rel.sdp.constraints[static_cast<std::size_t>(v)].push_back({blk, i, j, c});
      }
    }
  }
}

int half_up(int d) { return (d + 1) / 2; }

}  // namespace

MomentRelaxation build_pmi_relaxation(const Polynomial& f, const std::vector<PolyMatrix>& g, int t,
                                      const RelaxationOptions& opts) {
  const int m = f.vars();
  int dmax = f.degree();
  for (const auto& gj : g) {
    if (gj.vars() != m) throw InvalidInput("constraint and objective variable counts differ");
    dmax = std::max(dmax, gj.degree());
  }
  if (t < half_up(dmax) || t < 0) {
    throw OrderTooSmall("relaxation order " + std::to_string(t) + " is below the initial order " +
                        std::to_string(half_up(dmax)));
  }
  for (int v : opts.sign_symmetry) {
    if (v < 0 || v >= m) throw InvalidInput("sign symmetry variable out of range");
  }
  const auto& mask = opts.sign_symmetry;
  if (!mask.empty()) {
    require_even(f, mask);
    for (const auto& gj : g) {
      for (int i = 0; i < gj.dim(); ++i) {
        for (int j = 0; j < gj.dim(); ++j) require_even(gj.at(i, j), mask);
      }
    }
  }

  MomentRelaxation rel;
  rel.order = t;
  rel.moments = MonomialBasis(m, 2 * t);
  rel.sdp_index.assign(static_cast<std::size_t>(rel.moments.size()), -1);
  int nvar = 0;
  for (int i = 1; i < rel.moments.size(); ++i) {
    if (mask.empty() || parity(rel.moments[i], mask) == 0) rel.sdp_index[static_cast<std::size_t>(i)] = nvar++;
  }
  rel.sdp.constraints.resize(static_cast<std::size_t>(nvar));
  rel.sdp.rhs = Eigen::VectorXd::Zero(nvar);
  rel.sdp.sense = Sense::Minimize;

  rel.objective = linearize(f, rel.moments);
  for (const auto& [idx, c] : rel.objective) {
    if (idx == 0) {
      rel.sdp.offset += c;
    } else if (rel.sdp_index[static_cast<std::size_t>(idx)] >= 0) {
      rel.sdp.rhs(rel.sdp_index[static_cast<std::size_t>(idx)]) += c;
    }
  }

  for (const auto& rows : row_groups(m, t, mask)) {
    add_block(rel, moment_matrix_structure(rows, rel.moments));
  }
  for (const auto& gj : g) {
    const int tj = t - half_up(gj.degree());
    for (const auto& rows : row_groups(m, tj, mask)) {
      add_block(rel, localizing_matrix_structure(gj, rows, rel.moments));
    }
  }
  rel.sdp.canonicalize();
  std::ostringstream os;
  os << "moment relaxation order " << t << ", " << m << " variables, " << nvar << " moments";
  rel.sdp.origin = os.str();
  return rel;
}

void ContainmentProblem::validate() const {
  if (a.n() != b.n()) throw InvalidInput("inner and outer pencils must share the variable count");
  if (!(r > 0.0) || !(R >= r) || !std::isfinite(R)) throw InvalidInput("annulus radii need 0 < r <= R");
}

Polynomial containment_objective(const ContainmentProblem& cp) {
  const int n = cp.a.n();
  const int l = cp.b.k();
  const int m = n + l;
  Polynomial f(m);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      const Polynomial zz = Polynomial::variable(m, n + i) * Polynomial::variable(m, n + j);
      Polynomial entry = Polynomial::constant(m, cp.b.coeff(0)(i, j));
      for (int p = 0; p < n; ++p) {
        const double v = cp.b.coeff(p + 1)(i, j);
        if (v != 0.0) entry = entry + Polynomial::variable(m, p) * v;
      }
      f = f + zz * entry;
    }
  }
  return f;
}

PolyMatrix pencil_poly_matrix(const LinearPencil& p, int vars) {
  if (vars < p.n()) throw InvalidInput("pencil_poly_matrix: too few variables");
  const int k = p.k();
  PolyMatrix g(k, vars);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      Polynomial e = Polynomial::constant(vars, p.coeff(0)(i, j));
      for (int q = 0; q < p.n(); ++q) {
        const double v = p.coeff(q + 1)(i, j);
        if (v != 0.0) e = e + Polynomial::variable(vars, q) * v;
      }
      g.set(i, j, e);
    }
  }
  return g;
}

std::vector<PolyMatrix> containment_constraints(const ContainmentProblem& cp) {
  const int n = cp.a.n();
  const int l = cp.b.k();
  const int m = n + l;
  const PolyMatrix ga = pencil_poly_matrix(cp.a, m);
  Polynomial zz(m);
  for (int i = 0; i < l; ++i) zz = zz + Polynomial::variable(m, n + i) * Polynomial::variable(m, n + i);
  PolyMatrix inner_ring(1, m);
  inner_ring.set(0, 0, zz - Polynomial::constant(m, cp.r * cp.r));
  PolyMatrix outer_ring(1, m);
  outer_ring.set(0, 0, Polynomial::constant(m, cp.R * cp.R) - zz);
  return {ga, inner_ring, outer_ring};
}

MomentRelaxation build_containment_relaxation(const ContainmentProblem& cp, int t, bool z_symmetry) {
  cp.validate();
  if (t < 2) throw OrderTooSmall("containment relaxations start at order 2");
  RelaxationOptions opts;
  if (z_symmetry) {
    for (int i = 0; i < cp.b.k(); ++i) opts.sign_symmetry.push_back(cp.a.n() + i);
  }
  auto rel = build_pmi_relaxation(containment_objective(cp), containment_constraints(cp), t, opts);
  rel.sdp.origin = "containment " + rel.sdp.origin;
  return rel;
}

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Certified: return "certified";
    case VerdictKind::Refuted: return "refuted";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

double coeff_scale(const LinearPencil& p) {
  double s = 0.0;
  for (const auto& c : p.coeffs()) s = std::max(s, c.norm());
  return s;
}

// lambda_min(B(x)) for members of S_A, +inf otherwise.
double violation(const LinearPencil& a, const LinearPencil& b, const Eigen::VectorXd& x) {
  if (!x.allFinite() || !a.contains_point(x, 1e-9)) return std::numeric_limits<double>::infinity();
  return min_eigenvalue(b.evaluate(x));
}

bool genuine(const LinearPencil& b, const Eigen::VectorXd& x, double lam) {
  return lam < -1e-9 * (1.0 + b.evaluate(x).norm());
}

}  // namespace

std::optional<Eigen::VectorXd> find_violation(const LinearPencil& a, const LinearPencil& b,
                                              const std::vector<Eigen::VectorXd>& candidates,
                                              int samples, unsigned long long seed) {
  const int n = a.n();
  for (const auto& c : candidates) {
    if (c.size() != n) continue;
    const double lam = violation(a, b, c);
    if (std::isfinite(lam) && genuine(b, c, lam)) return c;
  }
  const ProbeResult pr = feasibility_probe(a);
  if (pr.outcome != ProbeOutcome::NonEmpty) return std::nullopt;
  const Eigen::VectorXd x0 = pr.x;
  {
    const double lam = violation(a, b, x0);
    if (std::isfinite(lam) && genuine(b, x0, lam)) return x0;
  }
  if (n == 0 || pr.margin <= 0.0) return std::nullopt;

  const Eigen::LLT<Eigen::MatrixXd> llt(a.evaluate(x0).matrix());
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(a.k(), a.k()));

  // Best point on the ray x0 + s d, s > 0. lambda_min(B) is concave along the
  // ray, so its minimum over the segment sits at an endpoint.
  auto along = [&](const Eigen::VectorXd& d, Eigen::VectorXd& best_x) {
    const Eigen::MatrixXd mm = linv * a.linear_part(d) * linv.transpose();
    const double lo = min_eigenvalue(SymMatrix(mm));
    std::vector<double> steps;
    if (lo < 0.0) {
      steps.push_back(-(1.0 - 1e-10) / lo);
    } else {
      for (double s = 1.0; s <= 1e6; s *= 10.0) steps.push_back(s);
    }
    double best = std::numeric_limits<double>::infinity();
    for (double s : steps) {
      Eigen::VectorXd x = x0 + s * d;
      double lam = violation(a, b, x);
      for (int shrink = 0; shrink < 5 && !std::isfinite(lam); ++shrink) {
        s *= 1.0 - 1e-8;
        x = x0 + s * d;
        lam = violation(a, b, x);
      }
      if (lam < best) {
        best = lam;
        best_x = x;
      }
    }
    return best;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd best_d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd best_x = x0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](Eigen::VectorXd d) {
    const double nd = d.norm();
    if (!(nd > 0.0)) return;
    d /= nd;
    Eigen::VectorXd x;
    const double lam = along(d, x);
    if (lam < best) {
      best = lam;
      best_d = d;
      best_x = x;
    }
  };
  for (const auto& c : candidates) {
    if (c.size() == n) consider(c - x0);
  }
  for (int p = 0; p < n; ++p) {
    consider(Eigen::VectorXd::Unit(n, p));
    consider(-Eigen::VectorXd::Unit(n, p));
  }
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd d(n);
    for (int p = 0; p < n; ++p) d(p) = gauss(rng);
    consider(d);
    if (std::isfinite(best) && genuine(b, best_x, best)) return best_x;
  }
  // Local refinement around the best direction.
  double step = 0.3;
  for (int it = 0; it < 400 && best_d.norm() > 0.0; ++it) {
    Eigen::VectorXd d(n);
    for (int p = 0; p < n; ++p) d(p) = best_d(p) + step * gauss(rng);
    const double before = best;
    consider(d);
    if (std::isfinite(best) && genuine(b, best_x, best)) return best_x;
    if (best >= before && it % 20 == 19) step *= 0.5;
  }
  return std::nullopt;
}

MuMomResult solve_mu_mom(const ContainmentProblem& cp, int t, const MuMomOptions& opts) {
  const MomentRelaxation rel = build_containment_relaxation(cp, t, opts.z_symmetry);
  MuMomResult res;
  res.sdp_variables = rel.sdp.num_constraints();
  res.solution = solve(rel.sdp, opts.solver);
  const SdpSolution& sol = res.solution;
  const double tol = opts.tol_cert * (1.0 + coeff_scale(cp.b));
  res.verdict.order = t;

  const int n = cp.a.n();
  auto extract = [&] {
    const Eigen::VectorXd y = rel.moment_vector(sol.y);
    const int m = rel.moments.vars();
    res.first_moments = y.segment(1, m);
    return Eigen::VectorXd(y.segment(1, n));
  };

  switch (sol.status) {
    case SdpStatus::DualInfeasible:
      // No moment vector at all: S_A (times the annulus) is empty.
      res.value = std::numeric_limits<double>::infinity();
      res.verdict.kind = VerdictKind::Certified;
      res.verdict.value = res.value;
      res.verdict.note = "relaxation infeasible: inner spectrahedron is empty";
      return res;
    case SdpStatus::PrimalInfeasible: {
      res.value = -std::numeric_limits<double>::infinity();
      res.verdict.value = res.value;
      auto w = find_violation(cp.a, cp.b, {}, opts.samples, opts.seed);
      if (w) {
        res.verdict.kind = VerdictKind::Refuted;
        res.verdict.witness = *w;
        res.verdict.witness_eig = min_eigenvalue(cp.b.evaluate(*w));
      } else {
        res.verdict.kind = VerdictKind::Inconclusive;
        res.verdict.note = "relaxation unbounded below";
      }
      return res;
    }
    case SdpStatus::Optimal:
      break;
    case SdpStatus::Inaccurate:
    case SdpStatus::IterLimit: {
      const auto& r = sol.residuals;
      if (r.primal <= 1e-5 && r.dual <= 1e-5 && r.gap <= 1e-5) {
        res.verdict.note = "solver stopped early with small residuals";
        break;
      }
      std::ostringstream os;
      os << "moment relaxation order " << t << ": solver status " << to_string(sol.status)
         << " (primal " << r.primal << ", dual " << r.dual << ", gap " << r.gap << ")";
      throw NumericalFailure(os.str());
    }
  }

  res.value = rel.sdp.quantity(sol.raw_value());
  res.verdict.value = res.value;
  const Eigen::VectorXd xbar = extract();
  if (res.value >= -tol) {
    res.verdict.kind = VerdictKind::Certified;
    return res;
  }
  auto w = find_violation(cp.a, cp.b, {xbar}, opts.samples, opts.seed);
  if (w) {
    res.verdict.kind = VerdictKind::Refuted;
    res.verdict.witness = *w;
    res.verdict.witness_eig = min_eigenvalue(cp.b.evaluate(*w));
  } else {
    res.verdict.kind = VerdictKind::Inconclusive;
    res.verdict.note = "negative relaxation value without a confirmed violating point";
  }
  return res;
}

}  // namespace spc
