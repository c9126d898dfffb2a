#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spc/momrelax.hpp"
#include "spc/pencil.hpp"
#include "spc/sdp.hpp"
#include "spc/sosrelax.hpp"

namespace spc {

/// C of size (k l) viewed as k x k blocks C_ij of size l x l, with
/// B_p = sum_ij a^p_ij C_ij for p = 0..n. For the extended form k counts the
/// extra leading row of 1 (+) A(x).
struct CpWitness {
  SymMatrix c{Eigen::MatrixXd::Zero(1, 1)};
  int k = 0;
  int l = 0;
  bool extended = false;
  double min_eig = 0.0;
  double equation_residual = 0.0;  ///< max_p ||B_p - sum_ij a^p_ij C_ij||_max

  Eigen::MatrixXd block(int i, int j) const { return c.matrix().block(i * l, j * l, l, l); }
};

enum class SdfpOutcome { Feasible, Infeasible, Inconclusive };

const char* to_string(SdfpOutcome o);

struct SdfpResult {
  SdfpOutcome outcome = SdfpOutcome::Inconclusive;
  std::optional<CpWitness> witness;
  double margin = 0.0;  ///< max over solutions of lambda_min(C), capped at 1
  SdpSolution solution;
  std::string note;
};

struct SdfpOptions {
  SolverOptions solver;
  double tol = 1e-7;  ///< margin threshold, scaled by 1 + ||B||
};

/// Feasibility of C PSD with B_p = sum_ij a^p_ij C_ij, posed as
/// max s s.t. C - s I PSD, s <= 1 and the equations. A margin above -tol
/// gives Feasible (witness checked to 1e-7), a dual bound below -tol or a
/// Farkas ray gives Infeasible. With `extended` the inner pencil is 1 (+) A.
SdfpResult cp_sdfp(const LinearPencil& a, const LinearPencil& b, bool extended,
                   const SdfpOptions& opts = {});

/// The SDP behind cp_sdfp. Block 0 holds C - sI, block 1 is diagonal
/// (s+, s-, 1 - s).
SdpProblem sdfp_problem(const LinearPencil& a, const LinearPencil& b, bool extended);

/// Choi matrix sum_ij E_ij (x) Phi(E_ij), size k l.
SymMatrix choi_matrix(const MapSpec& m);

struct ImplicationOptions {
  SolverOptions solver;
  double tol = 1e-6;
  int samples = 2000;
  unsigned long long seed = 1;
  double r = 1.0;
  double R = 2.0;
  bool throw_on_violation = true;
};

struct ImplicationReport {
  SdfpResult sdfp;                  ///< (1), extended form
  LambdaSosResult sos0;             ///< (2')
  std::vector<MuMomResult> mom;     ///< (2) for t = 2..t_max
  std::optional<Eigen::VectorXd> violation;  ///< (3) refuted by this point
  std::vector<std::string> diagnostics;      ///< chain breaks, one per line
  std::vector<std::string> notes;            ///< informational remarks
  bool consistent() const { return diagnostics.empty(); }
};

/// Runs every criterion and checks SDFP <=> lambda_sos(0) >= 0 => mu_mom(2) >= 0
/// => no violating point, plus monotonicity in t. Throws InvalidInput when
/// S_A is empty and InvariantViolation on a chain break (unless disabled).
ImplicationReport implication_report(const LinearPencil& a, const LinearPencil& b, int t_max,
                                     const ImplicationOptions& opts = {});

}  // namespace spc
