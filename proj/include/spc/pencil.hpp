#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spc/symcore.hpp"

namespace spc {

/// Affine matrix pencil A(x) = A_0 + sum_p x_p A_p with symmetric k x k
/// coefficients. Its spectrahedron is { x : A(x) is PSD }.
class LinearPencil {
 public:
  /// coeffs[0] is the constant term; all coefficients must share one size.
  explicit LinearPencil(std::vector<SymMatrix> coeffs);

  int n() const { return static_cast<int>(coeffs_.size()) - 1; }
  int k() const { return coeffs_.front().dim(); }
  const SymMatrix& coeff(int p) const { return coeffs_.at(static_cast<std::size_t>(p)); }
  const std::vector<SymMatrix>& coeffs() const { return coeffs_; }

  /// A(x). Throws InvalidInput unless x.size() == n().
  SymMatrix evaluate(const Eigen::VectorXd& x) const;

  /// Linear part sum_p x_p A_p (no constant term).
  Eigen::MatrixXd linear_part(const Eigen::VectorXd& x) const;

  bool contains_point(const Eigen::VectorXd& x, double tol) const;

  /// True iff A_0 is exactly the identity.
  bool is_monic() const;

  /// Pencil of the scaled set nu * S_A, i.e. x -> A(x / nu).
  LinearPencil scaled(double nu) const;

  /// Pencil in new coordinates: x = offset + basis * u.
  LinearPencil substitute(const Eigen::VectorXd& offset, const Eigen::MatrixXd& basis) const;

  /// Congruence V^T A(x) V for a k x r matrix V.
  LinearPencil congruence(const Eigen::MatrixXd& v) const;

  bool operator==(const LinearPencil& other) const { return coeffs_ == other.coeffs_; }

 private:
  std::vector<SymMatrix> coeffs_;
};

SymMatrix evaluate(const LinearPencil& p, const Eigen::VectorXd& x);
bool contains_point(const LinearPencil& p, const Eigen::VectorXd& x, double tol);

/// Normal form of a centred, axis-aligned ellipsoid:
/// I_{n+1} + sum_p (x_p / a_p) (E_{p,n+1} + E_{n+1,p}).
LinearPencil ellipsoid_pencil(const Eigen::VectorXd& semiaxes);

/// Ellipsoid normal form with all semiaxes equal to `radius`.
LinearPencil ball_pencil(int n, double radius);

/// Diagonal pencil diag(b + A x). Monic exactly when b is all ones.
LinearPencil polytope_pencil(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Elliptope pencil I_k + sum_{i<j} x_ij (E_ij + E_ji); variables ordered
/// (1,2), (1,3), ..., (1,k), (2,3), ..., (k-1,k).
LinearPencil elliptope_pencil(int k);

/// 1 (+) A(x): one extra leading row/column that is 1 in the constant term
/// and 0 elsewhere. Same spectrahedron and lineality space.
LinearPencil extend(const LinearPencil& p);

struct RandomPencilOptions {
  int n = 2;
  int k = 4;
  double density = 0.35;  ///< probability that an off-diagonal entry is kept
  double diag0 = 1.0;     ///< diagonal of A_0; A_1..A_n have zero diagonal
};

/// Sparse random pencil: off-diagonal entries U[-1,1], each kept with
/// probability `density` (upper triangle, mirrored). Deterministic in seed.
LinearPencil random_pencil(const RandomPencilOptions& opts, std::uint64_t seed);

/// Linear map Phi: R^{k x k} -> R^{l x l}, stored as the images of the matrix
/// units E_ij. Images satisfy Phi(E_ji) = Phi(E_ij)^T, so symmetric matrices
/// map to symmetric matrices.
class MapSpec {
 public:
  MapSpec(int k, int l, std::vector<Eigen::MatrixXd> unit_images);

  /// Samples `fn` on the matrix units.
  static MapSpec from_function(int k, int l,
                               const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& fn);

  int k() const { return k_; }
  int l() const { return l_; }
  const Eigen::MatrixXd& unit_image(int i, int j) const {
    return images_[static_cast<std::size_t>(i * k_ + j)];
  }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& a) const;
  SymMatrix apply(const SymMatrix& a) const;

  /// Images of the symmetric basis {E_ii} u {E_ij + E_ji, i<j}, in the
  /// order (1,1),(1,2),...,(1,k),(2,2),... : k(k+1)/2 matrices.
  std::vector<SymMatrix> symmetric_basis_images() const;

 private:
  int k_;
  int l_;
  std::vector<Eigen::MatrixXd> images_;
};

MapSpec identity_map(int k);

/// A -> tr(A) as a map into 1 x 1 matrices.
MapSpec trace_map(int k);

/// The 3 x 3 Choi-type map A -> 2 diag(A11+A22, A22+A33, A33+A11) - A.
MapSpec choi_type_map();

/// Orthonormal basis of traceless symmetric k x k matrices: off-diagonal
/// elements (E_ij+E_ji)/sqrt(2) for i<j in lexicographic order, then the
/// diagonal elements D_m = (sum_{i<=m} E_ii - m E_{m+1,m+1}) / sqrt(m(m+1)).
std::vector<SymMatrix> traceless_basis(int k);

/// Pencils (A, B) with n = k(k+1)/2 - 1 such that Phi is positive iff
/// S_A is contained in S_B. A(x) = I/k + sum x_a G_a parametrizes the unit
/// trace slice of the PSD cone and B(x) = Phi(A(x)).
std::pair<LinearPencil, LinearPencil> map_to_pencils(const MapSpec& m);

/// Coordinates x of a unit-trace symmetric matrix in the slice of
/// map_to_pencils.
Eigen::VectorXd slice_coordinates(const SymMatrix& a);

/// JSON pencil format: {"n":int,"k":int,"coeffs":[[k*k row-major], ...]}.
std::string pencil_to_json(const LinearPencil& p);

/// Parses the JSON pencil format. Rejects asymmetry above 1e-9 and shape
/// mismatches with InvalidInput.
LinearPencil pencil_from_json(std::string_view text);

LinearPencil read_pencil_file(const std::string& path);
void write_pencil_file(const LinearPencil& p, const std::string& path);

}  // namespace spc
