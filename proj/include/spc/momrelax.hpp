#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spc/pencil.hpp"
#include "spc/poly.hpp"
#include "spc/sdp.hpp"

namespace spc {

/// Dense symbolic matrix whose entries are linear forms in the moments.
struct SymbolicMatrix {
  int dim = 0;
  std::vector<LinearForm> entries;  // row-major, dim * dim

  const LinearForm& at(int i, int j) const { return entries[static_cast<std::size_t>(i * dim + j)]; }
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const;
};

/// [M(y)]_{a,b} = y_{a+b} over `basis` (rows), with indices into `moments`.
SymbolicMatrix moment_matrix_structure(const MonomialBasis& basis, const MonomialBasis& moments);

/// Same, restricted to a subset of basis rows (used for symmetry blocks).
SymbolicMatrix moment_matrix_structure(const std::vector<Exponent>& rows, const MonomialBasis& moments);

/// Linearization of [x]_t [x]_t^T (x) G(x): block (a,b) holds L(x^{a+b} G).
/// Row index is a * dim(G) + i.
SymbolicMatrix localizing_matrix_structure(const PolyMatrix& g, const MonomialBasis& basis,
                                           const MonomialBasis& moments);
SymbolicMatrix localizing_matrix_structure(const PolyMatrix& g, const std::vector<Exponent>& rows,
                                           const MonomialBasis& moments);

/// A(x) as a polynomial matrix in `vars` >= n variables (x first).
PolyMatrix pencil_poly_matrix(const LinearPencil& p, int vars);

struct RelaxationOptions {
  /// Variables flipped by a sign symmetry v -> -v of the whole problem. When
  /// set, moments that are odd in these variables vanish and every moment and
  /// localizing matrix splits into even and odd blocks. The builder checks
  /// that objective and constraints are invariant.
  std::vector<int> sign_symmetry;
};

/// Moment relaxation packaged as an SDP in dual form: the SDP variables are
/// the moments y_a (a != 0) that survive the symmetry reduction, y_0 = 1.
struct MomentRelaxation {
  SdpProblem sdp;
  MonomialBasis moments{0, 0};   ///< degree 2t
  std::vector<int> sdp_index;    ///< moment -> SDP variable, -1 for y_0 and vanishing moments
  int order = 0;
  LinearForm objective;          ///< L(f) over `moments`

  /// Full moment vector from SDP variables (y_0 = 1, vanishing moments 0).
  Eigen::VectorXd moment_vector(const Eigen::VectorXd& sdp_y) const;
  /// SDP variables from a full moment vector.
  Eigen::VectorXd sdp_vector(const Eigen::VectorXd& moment_y) const;
  /// Minimal eigenvalue over all PSD blocks at a given full moment vector.
  double min_block_eigenvalue(const Eigen::VectorXd& moment_y) const;
};

/// f_mom(t) = inf L(f) s.t. M_t(y) PSD, M_{t - ceil(d_j/2)}(G_j y) PSD, y_0 = 1.
/// Each G_j is a separate matrix constraint. Throws OrderTooSmall when t is
/// below ceil(max(deg f, deg G_j) / 2).
MomentRelaxation build_pmi_relaxation(const Polynomial& f, const std::vector<PolyMatrix>& g, int t,
                                      const RelaxationOptions& opts = {});

/// Inner pencil a (k x k) and outer pencil b (l x l) on the same n variables;
/// z ranges over the annulus r^2 <= z^T z <= R^2.
struct ContainmentProblem {
  LinearPencil a;
  LinearPencil b;
  double r = 1.0;
  double R = 2.0;

  void validate() const;
};

/// Polynomial data of the containment program in variables (x_1..x_n, z_1..z_l):
/// objective z^T B(x) z and constraints A(x), z^T z - r^2, R^2 - z^T z.
Polynomial containment_objective(const ContainmentProblem& cp);
std::vector<PolyMatrix> containment_constraints(const ContainmentProblem& cp);

/// Moment relaxation of order t >= 2. With `z_symmetry` the exact reduction
/// by z -> -z is applied.
MomentRelaxation build_containment_relaxation(const ContainmentProblem& cp, int t,
                                              bool z_symmetry = true);

enum class VerdictKind { Certified, Refuted, Inconclusive };

const char* to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double value = 0.0;  ///< optimal value that produced the verdict
  int order = 0;
  std::optional<Eigen::VectorXd> witness;  ///< x in S_A with B(x) not PSD (Refuted)
  double witness_eig = 0.0;                ///< lambda_min(B(witness))
  std::string note;
};

struct MuMomOptions {
  SolverOptions solver;
  double tol_cert = 1e-7;   ///< scaled by 1 + ||B|| (max coefficient norm)
  bool z_symmetry = true;
  int samples = 2000;       ///< boundary samples in the violation search
  unsigned long long seed = 1;
};

struct MuMomResult {
  double value = 0.0;  ///< mu_mom(t); -inf when the relaxation is unbounded
  Verdict verdict;
  SdpSolution solution;
  int sdp_variables = 0;
  Eigen::VectorXd first_moments;  ///< extracted (x, z) means when available
};

/// Solves the order-t containment relaxation. Throws NumericalFailure when
/// the solver neither converges nor returns a usable certificate.
MuMomResult solve_mu_mom(const ContainmentProblem& cp, int t, const MuMomOptions& opts = {});

/// Searches for x in S_A with lambda_min(B(x)) < 0: candidate points, then
/// boundary points along rays from an interior point, with local refinement.
std::optional<Eigen::VectorXd> find_violation(const LinearPencil& a, const LinearPencil& b,
                                              const std::vector<Eigen::VectorXd>& candidates,
                                              int samples, unsigned long long seed);

}  // namespace spc
