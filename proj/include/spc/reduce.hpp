#pragma once

#include <variant>

#include <Eigen/Dense>

#include "spc/pencil.hpp"

namespace spc {

/// A'(x) = A(x + x0).
LinearPencil translate(const LinearPencil& p, const Eigen::VectorXd& x0);

/// Orthonormal basis (columns) of { x : sum_p x_p A_p = 0 }.
Eigen::MatrixXd lineality_space(const LinearPencil& p);

struct LinealitySplit {
  LinearPencil a;
  LinearPencil b;
  Eigen::MatrixXd basis;  ///< n x r, orthonormal basis of L_A^perp; x = basis * u
};

/// Direction v in L_A with B~(v) != 0. Given S_A nonempty, S_A + R v leaves
/// S_B, so containment fails.
struct NotContained {
  Eigen::VectorXd direction;
  double b_norm = 0.0;  ///< ||sum_p v_p B_p||
};

/// Restricts both pencils to L_A^perp after checking L_A inside L_B.
/// Returns the inputs unchanged when L_A = {0}.
std::variant<LinealitySplit, NotContained> split_lineality(const LinearPencil& a,
                                                           const LinearPencil& b);

/// Compression V^T A(x) V onto the orthogonal complement of the common
/// nullspace of A_0..A_n. Assumes S_A full-dimensional for the interior
/// characterisation; the spectrahedron itself is always preserved.
/// Throws DegeneratePencil when all coefficients vanish.
LinearPencil reduced_pencil(const LinearPencil& p);

}  // namespace spc
