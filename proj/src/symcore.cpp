#include "spc/symcore.hpp"

#include <algorithm>
#include <cmath>

#include "spc/errors.hpp"

namespace spc {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput("SymMatrix requires a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw InvalidInput("SymMatrix entries must be finite");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Zero(int dim) {
  if (dim < 1) throw InvalidInput("SymMatrix dimension must be positive");
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), Unchecked{});
}

SymMatrix SymMatrix::Identity(int dim) {
  if (dim < 1) throw InvalidInput("SymMatrix dimension must be positive");
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim), Unchecked{});
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  if (other.dim() != dim()) throw InvalidInput("SymMatrix dimension mismatch");
  return SymMatrix(m_ + other.m_, Unchecked{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
  if (other.dim() != dim()) throw InvalidInput("SymMatrix dimension mismatch");
  return SymMatrix(m_ - other.m_, Unchecked{});
}

SymMatrix SymMatrix::operator*(double s) const {
  return SymMatrix(m_ * s, Unchecked{});
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(
    const SymMatrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m.matrix(), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge");
  }
  return es;
}

}  // namespace

double min_eigenvalue(const SymMatrix& m) {
  return decompose(m, false).eigenvalues()(0);
}

EigenPair min_eigenpair(const SymMatrix& m) {
  auto es = decompose(m, true);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

Eigen::VectorXd eigenvalues(const SymMatrix& m) {
  return decompose(m, false).eigenvalues();
}

bool is_psd(const SymMatrix& m, double tol) {
  if (tol < 0) throw InvalidInput("is_psd tolerance must be nonnegative");
  return min_eigenvalue(m) >= -tol;
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& m) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Eigen::MatrixXd(0, 0);
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  // Pad to at least `cols` rows so the SVD exposes the full right basis.
  Eigen::MatrixXd padded = m;
  if (m.rows() < cols) {
    padded = Eigen::MatrixXd::Zero(cols, cols);
    padded.topRows(m.rows()) = m;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NumericalFailure("SVD did not converge");
  }
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = kRankTol * smax * static_cast<double>(cols);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Eigen::MatrixXd common_nullspace(std::span<const SymMatrix> ms) {
  if (ms.empty()) throw InvalidInput("common_nullspace needs at least one matrix");
  const int dim = ms.front().dim();
  Eigen::MatrixXd stacked(dim * static_cast<int>(ms.size()), dim);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].dim() != dim) throw InvalidInput("common_nullspace: dimension mismatch");
    stacked.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = ms[i].matrix();
  }
  return nullspace(stacked);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis, int dim) {
  if (basis.cols() == 0) return Eigen::MatrixXd::Identity(dim, dim);
  if (basis.rows() != dim) throw InvalidInput("orthogonal_complement: row mismatch");
  return nullspace(basis.transpose());
}

}  // namespace spc
