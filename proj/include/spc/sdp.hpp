#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spc {

/// One upper-triangle entry (row <= col, zero based) of a symmetric block
/// diagonal matrix. Off-diagonal entries stand for both (row,col) and
/// (col,row).
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

using SparseBlockMatrix = std::vector<SdpEntry>;

/// How the common optimal value of the primal/dual pair maps onto the
/// quantity the builder cares about (see SdpProblem::quantity).
enum class Sense { Minimize, Maximize };

/// Block-structured SDP in the SDPA/CSDP convention:
///
///   primal:  max <C, X>   s.t. <A_i, X> = b_i (i = 1..m),  X PSD
///   dual:    min b^T y    s.t. sum_i y_i A_i - C  PSD
///
/// Blocks with positive size are dense PSD blocks, negative sizes denote
/// diagonal (nonnegative orthant) blocks, as in the .dat-s format where
/// F_0 = C, F_i = A_i and the "c" vector is b.
struct SdpProblem {
  std::vector<int> block_sizes;
  SparseBlockMatrix objective;                 ///< C
  std::vector<SparseBlockMatrix> constraints;  ///< A_1 .. A_m
  Eigen::VectorXd rhs;                         ///< b
  Sense sense = Sense::Minimize;
  double offset = 0.0;
  std::string origin;

  int num_constraints() const { return static_cast<int>(constraints.size()); }

  /// Throws InvalidInput on malformed data (bad block references, lower
  /// triangle entries, off-diagonal entries in diagonal blocks, NaN/Inf).
  void validate() const;

  /// Sorts entries and merges duplicates; drops exact zeros.
  void canonicalize();

  /// Builder-level value from the raw optimum p* = d*:
  /// raw + offset for Minimize, -(raw + offset) for Maximize.
  double quantity(double raw) const {
    return sense == Sense::Minimize ? raw + offset : -(raw + offset);
  }
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, Inaccurate, IterLimit };

const char* to_string(SdpStatus s);

struct SdpResiduals {
  double primal = 0.0;  ///< ||A(X) - b|| / (1 + ||b||) plus PSD violation of X
  double dual = 0.0;    ///< PSD violation of sum y_i A_i - C, relative to 1 + ||C||
  double gap = 0.0;     ///< |<C,X> - b^T y| / (1 + |<C,X>| + |b^T y|)
};

struct SolverOptions {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

/// Solver report. For Optimal/Inaccurate/IterLimit, (x, y) is the last
/// iterate. For PrimalInfeasible, y is a Farkas ray normalised to
/// b^T y = -1 with sum y_i A_i PSD. For DualInfeasible, x is a ray with
/// A(x) = 0 and <C, x> = 1.
struct SdpSolution {
  SdpStatus status = SdpStatus::Inaccurate;
  double primal_value = 0.0;  ///< <C, X>
  double dual_value = 0.0;    ///< b^T y
  std::vector<Eigen::MatrixXd> x;  ///< primal blocks (diagonal blocks as diagonal matrices)
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> z;  ///< sum y_i A_i - C, blockwise
  SdpResiduals residuals;          ///< recomputed from (x, y)
  double infeasibility_residual = 0.0;  ///< certificate residual for infeasible statuses
  int iterations = 0;

  double raw_value() const { return 0.5 * (primal_value + dual_value); }
};

/// Primal-dual interior point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
/// Deterministic; never throws on numerical breakdown (returns Inaccurate).
/// Throws InvalidInput for malformed problems.
SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

/// Independent recomputation of the residuals of a candidate (x, y).
SdpResiduals compute_residuals(const SdpProblem& p, const std::vector<Eigen::MatrixXd>& x,
                               const Eigen::VectorXd& y);

/// Dense blocks of a sparse block matrix.
std::vector<Eigen::MatrixXd> to_dense(const SdpProblem& p, const SparseBlockMatrix& m);

/// <M, X> for a sparse symmetric M and dense blocks X.
double inner(const SparseBlockMatrix& m, const std::vector<Eigen::MatrixXd>& x);

/// SDPA sparse (.dat-s) text with 17 significant digits per value.
std::string export_sdpa(const SdpProblem& p);

/// Parses .dat-s text (comment lines starting with '"' or '*' and the
/// punctuation ",(){}" are accepted). Throws InvalidInput.
SdpProblem parse_sdpa(std::string_view text);

}  // namespace spc
