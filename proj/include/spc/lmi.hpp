#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spc/pencil.hpp"
#include "spc/sdp.hpp"

namespace spc {

/// min c^T x s.t. P_j(x) PSD for every pencil (all pencils share n), as an
/// SDP in dual form with y = x. One PSD block per pencil.
SdpProblem lmi_problem(const std::vector<LinearPencil>& lmis, const Eigen::VectorXd& c);

struct LmiResult {
  SdpStatus status = SdpStatus::Inaccurate;
  double value = 0.0;     ///< optimal value (min c^T x)
  Eigen::VectorXd x;
  SdpSolution solution;
};

LmiResult solve_lmi(const std::vector<LinearPencil>& lmis, const Eigen::VectorXd& c,
                    const SolverOptions& opts = {});

/// Support interval [min d^T x, max d^T x] over S_A; infinite ends when the
/// LMI is unbounded in that direction. Throws NumericalFailure when a solve
/// gives neither an optimum nor a ray, InvalidInput when S_A is empty.
std::pair<double, double> extent(const LinearPencil& p, const Eigen::VectorXd& dir,
                                 const SolverOptions& opts = {});

enum class ProbeOutcome { NonEmpty, Empty, Unknown };

struct ProbeResult {
  ProbeOutcome outcome = ProbeOutcome::Unknown;
  Eigen::VectorXd x;    ///< a member of S_A when NonEmpty
  double margin = 0.0;  ///< lambda_min(A(x)) target, clipped at 1; 0 for lower-dimensional sets
  int reductions = 0;   ///< facial reduction steps taken
};

/// Decides whether S_A is nonempty: maximize s s.t. A(x) - s I PSD, s <= 1.
/// A clearly positive optimum gives an interior point, a clearly negative one
/// proves emptiness. A near-zero optimum triggers facial reduction on the
/// primal certificate, which handles weakly infeasible pencils such as
/// [[x,1],[1,0]].
ProbeResult feasibility_probe(const LinearPencil& p, const SolverOptions& opts = {});

}  // namespace spc
