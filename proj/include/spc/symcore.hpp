#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spc {

/// Relative cutoff for numerical rank decisions: a singular value sigma is
/// treated as zero when sigma <= kRankTol * sigma_max * dim.
inline constexpr double kRankTol = 1e-9;

/// Dense real symmetric matrix. Symmetry is enforced once, at construction,
/// by storing (M + M^T) / 2.
class SymMatrix {
 public:
  /// Throws InvalidInput for non-square, empty or non-finite input.
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix Zero(int dim);
  static SymMatrix Identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double s) const;

  /// Frobenius norm.
  double norm() const { return m_.norm(); }

  bool operator==(const SymMatrix& other) const { return m_ == other.m_; }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Smallest eigenvalue. Throws NumericalFailure if the eigensolver does not
/// converge.
double min_eigenvalue(const SymMatrix& m);

/// Smallest eigenvalue together with a unit eigenvector.
EigenPair min_eigenpair(const SymMatrix& m);

/// Full spectrum in ascending order.
Eigen::VectorXd eigenvalues(const SymMatrix& m);

/// True iff lambda_min(m) >= -tol.
bool is_psd(const SymMatrix& m, double tol);

/// Orthonormal basis (as columns) of the intersection of the kernels of all
/// matrices. The result may have zero columns.
Eigen::MatrixXd common_nullspace(std::span<const SymMatrix> ms);

/// Orthonormal basis of the right kernel of an arbitrary matrix, using the
/// kRankTol rule.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& m);

/// Orthonormal basis of the orthogonal complement of span(basis) in R^dim.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis, int dim);

}  // namespace spc
