#include "spc/posmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spc/errors.hpp"
#include "spc/lmi.hpp"

namespace spc {

namespace {

void push_sym(SparseBlockMatrix& m, int block, int r, int s, double c) {
  if (r == s) {
    m.push_back({block, r, r, c});
  } else {
    m.push_back({block, std::min(r, s), std::max(r, s), 0.5 * c});
  }
}

double coeff_scale(const LinearPencil& p) {
  double s = 0.0;
  for (const auto& c : p.coeffs()) s = std::max(s, c.norm());
  return s;
}

bool acceptable(const SdpSolution& sol) {
  if (sol.status == SdpStatus::Optimal) return true;
  const auto& r = sol.residuals;
  return (sol.status == SdpStatus::Inaccurate || sol.status == SdpStatus::IterLimit) &&
         r.primal <= 1e-5 && r.dual <= 1e-5 && r.gap <= 1e-5;
}

}  // namespace

const char* to_string(SdfpOutcome o) {
  switch (o) {
    case SdfpOutcome::Feasible: return "feasible";
    case SdfpOutcome::Infeasible: return "infeasible";
    case SdfpOutcome::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

SdpProblem sdfp_problem(const LinearPencil& a_in, const LinearPencil& b, bool extended) {
  if (a_in.n() != b.n()) throw InvalidInput("cp_sdfp: pencils differ in n");
  const LinearPencil a = extended ? extend(a_in) : a_in;
  const int n = a.n();
  const int k = a.k();
  const int l = b.k();
  const int pairs = l * (l + 1) / 2;

  SdpProblem p;
  p.origin = extended ? "complete positivity SDFP (extended pencil)" : "complete positivity SDFP";
  p.sense = Sense::Minimize;  // raw optimum is the margin s
  p.block_sizes = {k * l, -3};
  p.constraints.resize(static_cast<std::size_t>((n + 1) * pairs + 1));
  p.rhs = Eigen::VectorXd::Zero(p.num_constraints());
  int row = 0;
  for (int q = 0; q <= n; ++q) {
    const Eigen::MatrixXd& aq = a.coeff(q).matrix();
    const double tr = aq.trace();
    for (int s = 0; s < l; ++s) {
      for (int t = s; t < l; ++t, ++row) {
        auto& c = p.constraints[static_cast<std::size_t>(row)];
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            if (aq(i, j) != 0.0) push_sym(c, 0, i * l + s, j * l + t, aq(i, j));
          }
        }
        if (s == t && tr != 0.0) {
          c.push_back({1, 0, 0, tr});
          c.push_back({1, 1, 1, -tr});
        }
        p.rhs(row) = b.coeff(q)(s, t);
      }
    }
  }
  p.constraints.back() = {{1, 0, 0, 1.0}, {1, 1, 1, -1.0}, {1, 2, 2, 1.0}};
  p.rhs(row) = 1.0;
  p.objective = {{1, 0, 0, 1.0}, {1, 1, 1, -1.0}};
  p.canonicalize();
  p.validate();
  return p;
}

SdfpResult cp_sdfp(const LinearPencil& a_in, const LinearPencil& b, bool extended,
                   const SdfpOptions& opts) {
  const SdpProblem prob = sdfp_problem(a_in, b, extended);
  const LinearPencil a = extended ? extend(a_in) : a_in;
  const int k = a.k();
  const int l = b.k();
  SdfpResult res;
  res.solution = solve(prob, opts.solver);
  const SdpSolution& sol = res.solution;
  const double tol = opts.tol * (1.0 + coeff_scale(b));

  if (sol.status == SdpStatus::PrimalInfeasible) {
    res.outcome = SdfpOutcome::Infeasible;
    res.margin = -std::numeric_limits<double>::infinity();
    res.note = "equations have no symmetric solution";
    return res;
  }
  if (!acceptable(sol)) {
    res.outcome = SdfpOutcome::Inconclusive;
    std::ostringstream os;
    os << "solver status " << to_string(sol.status);
    res.note = os.str();
    return res;
  }
  res.margin = prob.quantity(sol.raw_value());
  if (res.margin >= -tol) {
    const double s = sol.x[1](0, 0) - sol.x[1](1, 1);
    Eigen::MatrixXd c = sol.x[0] + s * Eigen::MatrixXd::Identity(k * l, k * l);
    CpWitness w{SymMatrix(c), k, l, extended, 0.0, 0.0};
    w.min_eig = min_eigenvalue(w.c);
    for (int q = 0; q <= a.n(); ++q) {
      Eigen::MatrixXd acc = b.coeff(q).matrix();
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) acc -= a.coeff(q)(i, j) * w.block(i, j);
      }
      w.equation_residual = std::max(w.equation_residual, acc.cwiseAbs().maxCoeff());
    }
    res.witness = w;
    if (w.min_eig >= -tol && w.equation_residual <= 1e-7 * (1.0 + coeff_scale(b))) {
      res.outcome = SdfpOutcome::Feasible;
    } else {
      res.outcome = SdfpOutcome::Inconclusive;
      res.note = "witness failed validation";
    }
    return res;
  }
  // Dual value bounds every margin from above.
  if (sol.dual_value < -tol && sol.residuals.dual <= 1e-6) {
    res.outcome = SdfpOutcome::Infeasible;
  } else {
    res.outcome = SdfpOutcome::Inconclusive;
    res.note = "margin too close to zero";
  }
  return res;
}

SymMatrix choi_matrix(const MapSpec& m) {
  const int k = m.k();
  const int l = m.l();
  Eigen::MatrixXd c(k * l, k * l);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) c.block(i * l, j * l, l, l) = m.unit_image(i, j);
  }
  return SymMatrix(c);
}

ImplicationReport implication_report(const LinearPencil& a, const LinearPencil& b, int t_max,
                                     const ImplicationOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("implication_report: pencils differ in n");
  if (t_max < 2) throw OrderTooSmall("implication_report needs t_max >= 2");
  ImplicationReport rep;
  const ProbeResult pr = feasibility_probe(a, opts.solver);
  if (pr.outcome == ProbeOutcome::Empty) throw InvalidInput("inner spectrahedron is empty");
  if (pr.outcome == ProbeOutcome::Unknown) rep.notes.push_back("nonemptiness of S_A not confirmed");

  const double tol = opts.tol;
  ContainmentProblem cp{a, b, opts.r, opts.R};
  SdfpOptions so;
  so.solver = opts.solver;
  rep.sdfp = cp_sdfp(a, b, true, so);
  LambdaSosOptions lo;
  lo.solver = opts.solver;
  rep.sos0 = lambda_sos(cp, 0, lo);
  MuMomOptions mo;
  mo.solver = opts.solver;
  mo.samples = opts.samples;
  mo.seed = opts.seed;
  std::vector<Eigen::VectorXd> candidates;
  for (int t = 2; t <= t_max; ++t) {
    rep.mom.push_back(solve_mu_mom(cp, t, mo));
    const MuMomResult& m = rep.mom.back();
    if (m.verdict.witness) candidates.push_back(*m.verdict.witness);
    if (m.first_moments.size() >= a.n()) candidates.push_back(m.first_moments.head(a.n()));
  }
  rep.violation = find_violation(a, b, candidates, opts.samples, opts.seed);

  auto flag = [&](const std::string& s) { rep.diagnostics.push_back(s); };
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  const bool feasible = rep.sdfp.outcome == SdfpOutcome::Feasible;
  const bool infeasible = rep.sdfp.outcome == SdfpOutcome::Infeasible;
  const double s0 = rep.sos0.value;
  if (feasible && s0 < -tol) flag("(1) => (2'): SDFP feasible but lambda_sos(0) = " + num(s0));
  if (infeasible && s0 >= -tol) flag("(2') => (1): lambda_sos(0) = " + num(s0) + " but SDFP infeasible");
  const double m2 = rep.mom.front().value;
  if (feasible && m2 < -tol) flag("(1) => (2): SDFP feasible but mu_mom(2) = " + num(m2));
  if (s0 >= -tol && m2 < -tol) flag("(2') => (2): lambda_sos(0) = " + num(s0) + " but mu_mom(2) = " + num(m2));
  for (std::size_t i = 0; i + 1 < rep.mom.size(); ++i) {
    if (rep.mom[i].value > rep.mom[i + 1].value + tol) {
      flag("mu_mom not monotone at t = " + std::to_string(i + 2) + ": " + num(rep.mom[i].value) +
           " > " + num(rep.mom[i + 1].value));
    }
  }
  for (const auto& m : rep.mom) {
    if (std::isinf(m.value) && m.value > 0) flag("mu_mom infinite although S_A is nonempty");
  }
  if (rep.violation) {
    const double e = min_eigenvalue(b.evaluate(*rep.violation));
    // A member x with lambda_min(B(x)) = e < 0 bounds mu <= R^2 e and
    // lambda_sos <= e.
    const double mu_cap = opts.R * opts.R * e;
    for (std::size_t i = 0; i < rep.mom.size(); ++i) {
      if (rep.mom[i].value > mu_cap + tol) {
        flag("(2) => (3): mu_mom(" + std::to_string(i + 2) + ") = " + num(rep.mom[i].value) +
             " above the bound " + num(mu_cap) + " from a violating point");
      }
    }
    if (s0 > e + tol) flag("(2') => (3): lambda_sos(0) = " + num(s0) + " above lambda_min(B(x)) = " + num(e));
    if (feasible) flag("(1) => (3): SDFP feasible but a violating point exists");
  }
  if (!rep.diagnostics.empty() && opts.throw_on_violation) {
    std::string all = "implication chain broken:";
    for (const auto& d : rep.diagnostics) all += "\n  " + d;
    throw InvariantViolation(all);
  }
  return rep;
}

}  // namespace spc
