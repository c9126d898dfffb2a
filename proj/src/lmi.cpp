#include "spc/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spc/errors.hpp"

namespace spc {

SdpProblem lmi_problem(const std::vector<LinearPencil>& lmis, const Eigen::VectorXd& c) {
  if (lmis.empty()) throw InvalidInput("lmi_problem needs at least one pencil");
  const int n = lmis.front().n();
  if (c.size() != n) throw InvalidInput("lmi_problem: cost vector length differs from n");
  SdpProblem p;
  p.origin = "lmi";
  p.rhs = c;
  p.constraints.resize(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < lmis.size(); ++j) {
    const auto& pen = lmis[j];
    if (pen.n() != n) throw InvalidInput("lmi_problem: pencils must share the variable count");
    const int blk = static_cast<int>(j);
    p.block_sizes.push_back(pen.k());
    for (int r = 0; r < pen.k(); ++r) {
      for (int s = r; s < pen.k(); ++s) {
        const double a0 = pen.coeff(0)(r, s);
        if (a0 != 0.0) p.objective.push_back({blk, r, s, -a0});
        for (int q = 0; q < n; ++q) {
          const double a = pen.coeff(q + 1)(r, s);
          if (a != 0.0) p.constraints[static_cast<std::size_t>(q)].push_back({blk, r, s, a});
        }
      }
    }
  }
  return p;
}

LmiResult solve_lmi(const std::vector<LinearPencil>& lmis, const Eigen::VectorXd& c,
                    const SolverOptions& opts) {
  const SdpProblem p = lmi_problem(lmis, c);
  LmiResult r;
  r.solution = solve(p, opts);
  r.status = r.solution.status;
  r.x = r.solution.y;
  r.value = r.solution.dual_value;
  return r;
}

std::pair<double, double> extent(const LinearPencil& p, const Eigen::VectorXd& dir,
                                 const SolverOptions& opts) {
  if (dir.size() != p.n()) throw InvalidInput("extent: direction length differs from n");
  double ends[2];
  for (int side = 0; side < 2; ++side) {
    const double sgn = side == 0 ? 1.0 : -1.0;
    const LmiResult r = solve_lmi({p}, sgn * dir, opts);
    switch (r.status) {
      case SdpStatus::Optimal:
        ends[side] = sgn * r.value;
        break;
      case SdpStatus::PrimalInfeasible:
        ends[side] = -sgn * std::numeric_limits<double>::infinity();
        break;
      case SdpStatus::DualInfeasible:
        throw InvalidInput("extent: spectrahedron is empty");
      default:
        if (r.solution.residuals.primal <= 1e-6 && r.solution.residuals.dual <= 1e-6) {
          ends[side] = sgn * r.value;
          break;
        }
        throw NumericalFailure(std::string("extent: solver status ") + to_string(r.status));
    }
  }
  return {ends[0], ends[1]};
}

namespace {

double pencil_scale(const LinearPencil& p) {
  double s = 0.0;
  for (const auto& a : p.coeffs()) s = std::max(s, a.norm());
  return s;
}

ProbeResult probe(const LinearPencil& p, const SolverOptions& opts, int depth) {
  ProbeResult out;
  out.reductions = depth;
  const double tol = 1e-7 * (1.0 + pencil_scale(p));
  const int n = p.n();
  const int k = p.k();
  if (n == 0) {
    const double lo = min_eigenvalue(p.coeff(0));
    out.x = Eigen::VectorXd(0);
    if (lo >= -tol) {
      out.outcome = ProbeOutcome::NonEmpty;
      out.margin = std::min(1.0, std::max(lo, 0.0));
    } else {
      out.outcome = ProbeOutcome::Empty;
    }
    return out;
  }

  // Variables (x, s): A(x) - s I PSD and 1 - s >= 0; minimize -s.
  std::vector<SymMatrix> lifted(p.coeffs().begin(), p.coeffs().end());
  lifted.push_back(SymMatrix::Identity(k) * -1.0);
  std::vector<SymMatrix> cap;
  cap.push_back(SymMatrix::Identity(1));
  for (int q = 0; q < n; ++q) cap.push_back(SymMatrix::Zero(1));
  cap.push_back(SymMatrix::Identity(1) * -1.0);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = -1.0;
  const LmiResult r = solve_lmi({LinearPencil(lifted), LinearPencil(cap)}, c, opts);
  const SdpSolution& sol = r.solution;

  if (sol.status == SdpStatus::DualInfeasible || sol.status == SdpStatus::PrimalInfeasible) {
    // Neither can happen for this bounded, always-feasible program.
    out.outcome = ProbeOutcome::Unknown;
    return out;
  }
  const Eigen::VectorXd x = r.x.head(n);
  if (x.allFinite()) {
    const double lo = min_eigenvalue(p.evaluate(x));
    if (lo > tol) {
      out.outcome = ProbeOutcome::NonEmpty;
      out.x = x;
      out.margin = std::min(1.0, lo);
      return out;
    }
  }
  if (sol.residuals.primal > 1e-6) {
    out.outcome = ProbeOutcome::Unknown;
    return out;
  }
  // Weak duality: every feasible (x, s) has -s >= <C, X>.
  if (sol.primal_value > tol) {
    out.outcome = ProbeOutcome::Empty;
    return out;
  }
  if (depth > k) {
    out.outcome = ProbeOutcome::Unknown;
    return out;
  }

  // Facial reduction: W = X[0] is PSD with <A_p, W> = 0 and <A_0, W> ~ 0, so
  // every member satisfies A(x) W = 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.x[0]);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double wmax = ev(ev.size() - 1);
  if (!(wmax > 0.0)) {
    out.outcome = ProbeOutcome::Unknown;
    return out;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-5 * wmax) ++rank;
  }
  const Eigen::MatrixXd range = es.eigenvectors().rightCols(rank);

  Eigen::MatrixXd m(k * rank, n);
  for (int q = 0; q < n; ++q) {
    const Eigen::MatrixXd col = p.coeff(q + 1).matrix() * range;
    m.col(q) = Eigen::Map<const Eigen::VectorXd>(col.data(), col.size());
  }
  const Eigen::MatrixXd a0r = p.coeff(0).matrix() * range;
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(a0r.data(), a0r.size());
  // Truncated least squares: coefficients at the level of the interior point
  // noise in the range vectors must not produce huge spurious solutions.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = 1e-6 * (1.0 + pencil_scale(p));
  Eigen::Index rk = 0;
  while (rk < sv.size() && sv(rk) > cut) ++rk;
  const Eigen::VectorXd proj = svd.matrixU().leftCols(rk).transpose() * rhs;
  const Eigen::VectorXd u0 =
      svd.matrixV().leftCols(rk) * (proj.array() / sv.head(rk).array()).matrix();
  if ((m * u0 - rhs).norm() > 1e-6 * (1.0 + rhs.norm())) {
    out.outcome = ProbeOutcome::Empty;
    out.reductions = depth + 1;
    return out;
  }
  const Eigen::MatrixXd nb = svd.matrixV().rightCols(n - rk);
  const Eigen::MatrixXd v = orthogonal_complement(range, k);
  if (v.cols() == 0) {
    out.outcome = ProbeOutcome::NonEmpty;
    out.reductions = depth + 1;
    out.x = u0;
    out.margin = 0.0;
    return out;
  }
  const LinearPencil reduced = p.substitute(u0, nb).congruence(v);
  ProbeResult inner_result = probe(reduced, opts, depth + 1);
  out.outcome = inner_result.outcome;
  out.reductions = inner_result.reductions;
  if (inner_result.outcome == ProbeOutcome::NonEmpty) {
    out.x = u0 + nb * inner_result.x;
    out.margin = 0.0;
  }
  return out;
}

}  // namespace

ProbeResult feasibility_probe(const LinearPencil& p, const SolverOptions& opts) {
  try {
    return probe(p, opts, 0);
  } catch (const NumericalFailure&) {
    return ProbeResult{};
  }
}

}  // namespace spc
