#include "spc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spc/errors.hpp"

namespace spc {

namespace {

// All exponents of exactly degree d in n variables, first exponent descending.
void enumerate(int n, int d, int pos, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[static_cast<std::size_t>(pos)] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate(n, d - e, pos + 1, cur, out);
  }
  cur[static_cast<std::size_t>(pos)] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree) {
  if (vars < 0 || degree < 0) throw InvalidInput("monomial basis needs nonnegative sizes");
  if (vars == 0) {
    monos_.push_back({});
  } else {
    Exponent cur(static_cast<std::size_t>(vars), 0);
    for (int d = 0; d <= degree; ++d) enumerate(vars, d, 0, cur, monos_);
  }
  for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], static_cast<int>(i));
}

int MonomialBasis::find(const Exponent& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? -1 : it->second;
}

int MonomialBasis::index(const Exponent& e) const {
  const int i = find(e);
  if (i < 0) throw InvalidInput("monomial outside the basis");
  return i;
}

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

Exponent add(const Exponent& a, const Exponent& b) {
  Exponent r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Polynomial Polynomial::constant(int vars, double c) {
  Polynomial p(vars);
  p.add_term(Exponent(static_cast<std::size_t>(vars), 0), c);
  return p;
}

Polynomial Polynomial::variable(int vars, int i) {
  if (i < 0 || i >= vars) throw InvalidInput("variable index out of range");
  Exponent e(static_cast<std::size_t>(vars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  Polynomial p(vars);
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (static_cast<int>(e.size()) != vars_) throw InvalidInput("exponent length mismatch");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.vars_ != vars_) throw InvalidInput("polynomial variable count mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.vars_ != vars_) throw InvalidInput("polynomial variable count mismatch");
  Polynomial r(vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) r.add_term(add(ea, eb), ca * cb);
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(vars_);
  if (s == 0.0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != vars_) throw InvalidInput("evaluation point has the wrong length");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < vars_; ++i) {
      if (e[static_cast<std::size_t>(i)] > 0) t *= std::pow(x(i), e[static_cast<std::size_t>(i)]);
    }
    s += t;
  }
  return s;
}

PolyMatrix::PolyMatrix(int dim, int vars)
    : dim_(dim), vars_(vars), e_(static_cast<std::size_t>(dim * dim), Polynomial(vars)) {
  if (dim < 1) throw InvalidInput("polynomial matrix needs a positive size");
}

int PolyMatrix::degree() const {
  int d = 0;
  for (const auto& p : e_) d = std::max(d, p.degree());
  return d;
}

void PolyMatrix::set(int i, int j, const Polynomial& p) {
  if (p.vars() != vars_) throw InvalidInput("polynomial variable count mismatch");
  e_[static_cast<std::size_t>(i * dim_ + j)] = p;
  e_[static_cast<std::size_t>(j * dim_ + i)] = p;
}

Eigen::MatrixXd PolyMatrix::evaluate(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = at(i, j).evaluate(x);
  }
  return m;
}

LinearForm linearize(const Polynomial& poly, const MonomialBasis& moments) {
  if (poly.vars() != moments.vars()) throw InvalidInput("linearize: variable count mismatch");
  LinearForm f;
  for (const auto& [e, c] : poly.terms()) {
    const int i = moments.find(e);
    if (i < 0) throw InvalidInput("linearize: polynomial degree exceeds the moment basis");
    f.emplace_back(i, c);
  }
  std::sort(f.begin(), f.end());
  return f;
}

double apply(const LinearForm& f, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (const auto& [i, c] : f) s += c * y(i);
  return s;
}

Eigen::VectorXd point_moments(const MonomialBasis& moments, const Eigen::VectorXd& x) {
  if (x.size() != moments.vars()) throw InvalidInput("point_moments: wrong point length");
  Eigen::VectorXd y(moments.size());
  for (int i = 0; i < moments.size(); ++i) {
    double v = 1.0;
    const auto& e = moments[i];
    for (int k = 0; k < moments.vars(); ++k) {
      for (int r = 0; r < e[static_cast<std::size_t>(k)]; ++r) v *= x(k);
    }
    y(i) = v;
  }
  return y;
}

}  // namespace spc
