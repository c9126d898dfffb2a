#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spc/momrelax.hpp"
#include "spc/poly.hpp"
#include "spc/sdp.hpp"

namespace spc {

/// Sos-matrix relaxation of
///
///   sup lambda  s.t.  B(x) - lambda I_l - (<S_ij(x), A(x)>)_ij = T(x),
///                     S(x) (l x l blocks of size k x k) and T(x) sos-matrices,
///
/// with S and T in Gram form over the degree-t monomials W_t(x):
/// S(x) = (W_t (x) I_kl)^T Q_S (W_t (x) I_kl), likewise T with I_l.
///
/// SDP layout (primal, max <C,X>): block 0 is Q_S (kl * N), block 1 is Q_T
/// (l * N), block 2 is the diagonal pair (lambda+, lambda-), N = C(n+t, t).
/// Gram index is (monomial a, row r) -> a * dim + r. One equation per
/// monomial of degree <= 2t+1 and entry i <= j of the l x l identity.
struct SosRelaxation {
  SdpProblem sdp;
  MonomialBasis gram{0, 0};     ///< W_t
  MonomialBasis matched{0, 0};  ///< monomials whose coefficients are matched
  int order = 0;
  int k = 0;
  int l = 0;

  /// lambda from a primal point.
  double lambda(const std::vector<Eigen::MatrixXd>& x) const;
  /// S(x) and T(x) reconstructed from the Gram blocks.
  Eigen::MatrixXd s_at(const std::vector<Eigen::MatrixXd>& x, const Eigen::VectorXd& pt) const;
  Eigen::MatrixXd t_at(const std::vector<Eigen::MatrixXd>& x, const Eigen::VectorXd& pt) const;
};

SosRelaxation build_sos_relaxation(const ContainmentProblem& cp, int t);

/// max over points of ||B - lambda I - (<S_ij, A>) - T|| evaluated pointwise
/// from the Gram blocks (independent of the coefficient equations).
double identity_residual(const SosRelaxation& rel, const ContainmentProblem& cp,
                         const std::vector<Eigen::MatrixXd>& x,
                         const std::vector<Eigen::VectorXd>& points);

struct LambdaSosOptions {
  SolverOptions solver;
  double tol_cert = 1e-7;  ///< scaled by 1 + ||B|| (max coefficient norm)
};

struct LambdaSosResult {
  double value = 0.0;  ///< lambda_sos(t); +inf if S_A is empty, -inf if infeasible
  Verdict verdict;
  SdpSolution solution;
  int equations = 0;   ///< affine equations of the built SDP
  long long unknowns = 0;  ///< 1 + free entries of the Gram matrices
};

/// Nonnegative values certify containment; negative values are only lower
/// bounds and give Inconclusive. Throws NumericalFailure.
LambdaSosResult lambda_sos(const ContainmentProblem& cp, int t, const LambdaSosOptions& opts = {});

struct UnknownCounts {
  double sos_count = 0.0;
  double moment_count = 0.0;
};

/// sos_count = 1 + N/2 [k^2 l^2 N + l^2 N + k l + l] - m l (l+1), N = C(n+t,t);
/// moment_count = M/2 (M - 1), M = C(n+l+t, t).
UnknownCounts count_unknowns(int n, int k, int l, int t, int m);

double binomial(int n, int r);

}  // namespace spc
