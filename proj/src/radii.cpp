#include "spc/radii.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spc/errors.hpp"
#include "spc/momrelax.hpp"

namespace spc {

const char* to_string(RadiusStatus s) {
  switch (s) {
    case RadiusStatus::Finite: return "finite";
    case RadiusStatus::Unbounded: return "unbounded";
    case RadiusStatus::Empty: return "empty";
  }
  return "unknown";
}

SdpProblem circumradius_problem(const LinearPencil& p, const Eigen::VectorXd& center, int t) {
  const int n = p.n();
  if (center.size() != n) throw InvalidInput("circumradius_sq: centre length differs from n");
  if (t < 1) throw OrderTooSmall("circumradius relaxations start at order 1");
  Polynomial f(n);
  for (int i = 0; i < n; ++i) {
    const Polynomial d = Polynomial::variable(n, i) - Polynomial::constant(n, center(i));
    f = f - d * d;
  }
  MomentRelaxation rel = build_pmi_relaxation(f, {pencil_poly_matrix(p, n)}, t);
  rel.sdp.sense = Sense::Maximize;
  rel.sdp.origin = "circumradius " + rel.sdp.origin;
  return rel.sdp;
}

RadiusResult circumradius_sq(const LinearPencil& p, const Eigen::VectorXd& center, int t,
                             const SolverOptions& opts) {
  const SdpProblem sdp = circumradius_problem(p, center, t);
  RadiusResult res;
  res.order = t;
  res.solution = solve(sdp, opts);
  const SdpSolution& sol = res.solution;
  switch (sol.status) {
    case SdpStatus::PrimalInfeasible:
      res.status = RadiusStatus::Unbounded;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    case SdpStatus::DualInfeasible:
      res.status = RadiusStatus::Empty;
      res.value = -std::numeric_limits<double>::infinity();
      return res;
    case SdpStatus::Optimal:
      break;
    case SdpStatus::Inaccurate:
    case SdpStatus::IterLimit: {
      const auto& r = sol.residuals;
      if (r.primal <= 1e-5 && r.dual <= 1e-5 && r.gap <= 1e-5) break;
      std::ostringstream os;
      os << "circumradius order " << t << ": solver status " << to_string(sol.status);
      throw NumericalFailure(os.str());
    }
  }
  res.value = sdp.quantity(sol.raw_value());
  return res;
}

BoundednessCertificate boundedness_certificate(const LinearPencil& p, int t, const SolverOptions& opts) {
  const RadiusResult r = circumradius_sq(p, Eigen::VectorXd::Zero(p.n()), t, opts);
  BoundednessCertificate c;
  c.radius_sq = r.value;
  if (r.status == RadiusStatus::Unbounded) return c;
  c.bounded = true;
  c.n_bound = r.status == RadiusStatus::Empty
                  ? 0
                  : static_cast<long long>(std::ceil(std::max(0.0, r.value - 1e-6)));
  return c;
}

}  // namespace spc
