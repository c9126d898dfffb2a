#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spc {

using Exponent = std::vector<int>;

/// Monomials of total degree <= degree in `vars` variables, graded then
/// lexicographic: 1, x1, x2, ..., x1^2, x1 x2, ..., x2^2, ...
class MonomialBasis {
 public:
  MonomialBasis(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(monos_.size()); }
  const Exponent& operator[](int i) const { return monos_[static_cast<std::size_t>(i)]; }
  const std::vector<Exponent>& monomials() const { return monos_; }

  /// Position of an exponent, or -1 when absent.
  int find(const Exponent& e) const;
  /// Position of an exponent; throws InvalidInput when absent.
  int index(const Exponent& e) const;

 private:
  int vars_;
  int degree_;
  std::vector<Exponent> monos_;
  std::map<Exponent, int> index_;
};

int total_degree(const Exponent& e);
Exponent add(const Exponent& a, const Exponent& b);

/// Sparse real polynomial.
class Polynomial {
 public:
  explicit Polynomial(int vars = 0) : vars_(vars) {}

  static Polynomial constant(int vars, double c);
  static Polynomial variable(int vars, int i);

  int vars() const { return vars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, double>& terms() const { return terms_; }

  void add_term(const Exponent& e, double c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  double evaluate(const Eigen::VectorXd& x) const;

 private:
  int vars_;
  std::map<Exponent, double> terms_;
};

/// Symmetric matrix with polynomial entries (full storage).
class PolyMatrix {
 public:
  PolyMatrix(int dim, int vars);

  int dim() const { return dim_; }
  int vars() const { return vars_; }
  int degree() const;
  const Polynomial& at(int i, int j) const { return e_[static_cast<std::size_t>(i * dim_ + j)]; }
  /// Sets (i,j) and (j,i).
  void set(int i, int j, const Polynomial& p);

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;

 private:
  int dim_;
  int vars_;
  std::vector<Polynomial> e_;
};

/// Sparse linear functional in the moments: pairs (moment index, coefficient).
using LinearForm = std::vector<std::pair<int, double>>;

/// L_y(poly) as coefficients over `moments`. Throws InvalidInput when a term
/// is not in the basis (degree overflow or variable-count mismatch).
LinearForm linearize(const Polynomial& poly, const MonomialBasis& moments);

double apply(const LinearForm& f, const Eigen::VectorXd& y);

/// y_alpha = x^alpha for every monomial of the basis.
Eigen::VectorXd point_moments(const MonomialBasis& moments, const Eigen::VectorXd& x);

}  // namespace spc
