#include "spc/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "spc/errors.hpp"

namespace spc {

namespace {

double linear_scale(const LinearPencil& p) {
  double s = 0.0;
  for (int q = 1; q <= p.n(); ++q) s = std::max(s, p.coeff(q).norm());
  return s;
}

}  // namespace

LinearPencil translate(const LinearPencil& p, const Eigen::VectorXd& x0) {
  if (x0.size() != p.n()) throw InvalidInput("translate: offset length differs from n");
  std::vector<SymMatrix> c = p.coeffs();
  c[0] = p.evaluate(x0);
  return LinearPencil(std::move(c));
}

Eigen::MatrixXd lineality_space(const LinearPencil& p) {
  const int n = p.n();
  const int k = p.k();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  // Upper triangle vectorisation; the sqrt(2) weight keeps it an isometry.
  Eigen::MatrixXd m(k * (k + 1) / 2, n);
  for (int q = 0; q < n; ++q) {
    const Eigen::MatrixXd& a = p.coeff(q + 1).matrix();
    int r = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) m(r++, q) = i == j ? a(i, j) : std::sqrt(2.0) * a(i, j);
    }
  }
  return nullspace(m);
}

std::variant<LinealitySplit, NotContained> split_lineality(const LinearPencil& a,
                                                           const LinearPencil& b) {
  if (a.n() != b.n()) throw InvalidInput("split_lineality: pencils differ in n");
  const Eigen::MatrixXd la = lineality_space(a);
  if (la.cols() == 0) return LinealitySplit{a, b, Eigen::MatrixXd::Identity(a.n(), a.n())};
  const double tol = 1e-9 * std::max(1.0, linear_scale(b));
  for (Eigen::Index c = 0; c < la.cols(); ++c) {
    const double bn = b.linear_part(la.col(c)).norm();
    if (bn > tol) return NotContained{la.col(c), bn};
  }
  const Eigen::MatrixXd v = orthogonal_complement(la, a.n());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(a.n());
  return LinealitySplit{a.substitute(zero, v), b.substitute(zero, v), v};
}

LinearPencil reduced_pencil(const LinearPencil& p) {
  bool all_zero = true;
  for (const auto& c : p.coeffs()) all_zero = all_zero && c.norm() == 0.0;
  if (all_zero) throw DegeneratePencil("reduced_pencil: all coefficients are zero");
  const Eigen::MatrixXd nul = common_nullspace(p.coeffs());
  if (nul.cols() == 0) return p;
  return p.congruence(orthogonal_complement(nul, p.k()));
}

}  // namespace spc
