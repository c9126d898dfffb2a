#include "spc/sosrelax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spc/errors.hpp"

namespace spc {

namespace {

constexpr int kGramS = 0;
constexpr int kGramT = 1;
constexpr int kLambda = 2;

int pair_index(int i, int j, int l) {
  // Row-major position of (i, j), i <= j, in the upper triangle.
  return i * l - i * (i - 1) / 2 + (j - i);
}

void push_sym(SparseBlockMatrix& m, int block, int r, int s, double c) {
  if (r == s) {
    m.push_back({block, r, r, c});
  } else {
    m.push_back({block, std::min(r, s), std::max(r, s), 0.5 * c});
  }
}

Eigen::MatrixXd gram_eval(const Eigen::MatrixXd& q, const MonomialBasis& gram, int d,
                          const Eigen::VectorXd& pt) {
  const Eigen::VectorXd w = point_moments(gram, pt);
  Eigen::MatrixXd kr = Eigen::MatrixXd::Zero(gram.size() * d, d);
  for (int a = 0; a < gram.size(); ++a) kr.block(a * d, 0, d, d).diagonal().setConstant(w(a));
  return kr.transpose() * q * kr;
}

double coeff_scale(const LinearPencil& p) {
  double s = 0.0;
  for (const auto& c : p.coeffs()) s = std::max(s, c.norm());
  return s;
}

}  // namespace

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return std::round(v);
}

UnknownCounts count_unknowns(int n, int k, int l, int t, int m) {
  if (n < 0 || k < 0 || l < 0 || t < 0 || m < 0) throw InvalidInput("count_unknowns: negative argument");
  const double nn = binomial(n + t, t);
  const double kl = static_cast<double>(k) * l;
  UnknownCounts c;
  c.sos_count = 1.0 + 0.5 * nn * (kl * kl * nn + static_cast<double>(l) * l * nn + kl + l) -
                static_cast<double>(m) * l * (l + 1);
  const double mm = binomial(n + l + t, t);
  c.moment_count = 0.5 * mm * (mm - 1.0);
  return c;
}

double SosRelaxation::lambda(const std::vector<Eigen::MatrixXd>& x) const {
  return x[kLambda](0, 0) - x[kLambda](1, 1);
}

Eigen::MatrixXd SosRelaxation::s_at(const std::vector<Eigen::MatrixXd>& x,
                                    const Eigen::VectorXd& pt) const {
  return gram_eval(x[kGramS], gram, k * l, pt);
}

Eigen::MatrixXd SosRelaxation::t_at(const std::vector<Eigen::MatrixXd>& x,
                                    const Eigen::VectorXd& pt) const {
  return gram_eval(x[kGramT], gram, l, pt);
}

SosRelaxation build_sos_relaxation(const ContainmentProblem& cp, int t) {
  cp.validate();
  if (t < 0) throw InvalidInput("sos relaxation order must be nonnegative");
  const int n = cp.a.n();
  const int k = cp.a.k();
  const int l = cp.b.k();
  const int kl = k * l;

  SosRelaxation rel;
  rel.order = t;
  rel.k = k;
  rel.l = l;
  rel.gram = MonomialBasis(n, t);
  rel.matched = MonomialBasis(n, n == 0 ? 0 : 2 * t + 1);
  const int ng = rel.gram.size();
  const int pairs = l * (l + 1) / 2;

  SdpProblem& p = rel.sdp;
  p.origin = "sos-matrix containment relaxation";
  p.sense = Sense::Minimize;  // the raw optimum is lambda itself
  p.block_sizes = {kl * ng, l * ng, -2};
  p.constraints.resize(static_cast<std::size_t>(rel.matched.size() * pairs));
  p.rhs = Eigen::VectorXd::Zero(p.num_constraints());
  auto row = [&](int alpha, int i, int j) -> std::size_t {
    return static_cast<std::size_t>(alpha * pairs + pair_index(i, j, l));
  };

  // Right-hand side: coefficients of B(x).
  for (int q = 0; q <= n; ++q) {
    Exponent e(static_cast<std::size_t>(n), 0);
    if (q > 0) e[static_cast<std::size_t>(q - 1)] = 1;
    const int alpha = rel.matched.index(e);
    const Eigen::MatrixXd& bq = cp.b.coeff(q).matrix();
    for (int i = 0; i < l; ++i) {
      for (int j = i; j < l; ++j) p.rhs(static_cast<Eigen::Index>(row(alpha, i, j))) = bq(i, j);
    }
  }

  for (int a = 0; a < ng; ++a) {
    for (int b = 0; b < ng; ++b) {
      const Exponent ab = add(rel.gram[a], rel.gram[b]);
      // T(x) contributions.
      const int alpha = rel.matched.index(ab);
      for (int i = 0; i < l; ++i) {
        for (int j = i; j < l; ++j) push_sym(p.constraints[row(alpha, i, j)], kGramT, a * l + i, b * l + j, 1.0);
      }
      // <S_ij(x), A(x)> contributions, one per pencil coefficient.
      for (int q = 0; q <= n; ++q) {
        Exponent e = ab;
        if (q > 0) e[static_cast<std::size_t>(q - 1)] += 1;
        const int beta = rel.matched.index(e);
        const Eigen::MatrixXd& aq = cp.a.coeff(q).matrix();
        for (int u = 0; u < k; ++u) {
          for (int v = 0; v < k; ++v) {
            const double c = aq(u, v);
            if (c == 0.0) continue;
            for (int i = 0; i < l; ++i) {
              for (int j = i; j < l; ++j) {
                push_sym(p.constraints[row(beta, i, j)], kGramS, a * kl + i * k + u, b * kl + j * k + v, c);
              }
            }
          }
        }
      }
    }
  }
  const int zero = rel.matched.index(Exponent(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < l; ++i) {
    auto& c = p.constraints[row(zero, i, i)];
    c.push_back({kLambda, 0, 0, 1.0});
    c.push_back({kLambda, 1, 1, -1.0});
  }
  p.objective = {{kLambda, 0, 0, 1.0}, {kLambda, 1, 1, -1.0}};
  p.canonicalize();
  p.validate();
  return rel;
}

double identity_residual(const SosRelaxation& rel, const ContainmentProblem& cp,
                         const std::vector<Eigen::MatrixXd>& x,
                         const std::vector<Eigen::VectorXd>& points) {
  const int k = rel.k;
  const int l = rel.l;
  const double lam = rel.lambda(x);
  double worst = 0.0;
  for (const auto& pt : points) {
    const Eigen::MatrixXd s = rel.s_at(x, pt);
    const Eigen::MatrixXd ax = cp.a.evaluate(pt).matrix();
    Eigen::MatrixXd lhs = cp.b.evaluate(pt).matrix() - lam * Eigen::MatrixXd::Identity(l, l);
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j < l; ++j) lhs(i, j) -= (s.block(i * k, j * k, k, k).cwiseProduct(ax)).sum();
    }
    worst = std::max(worst, (lhs - rel.t_at(x, pt)).norm());
  }
  return worst;
}

LambdaSosResult lambda_sos(const ContainmentProblem& cp, int t, const LambdaSosOptions& opts) {
  const SosRelaxation rel = build_sos_relaxation(cp, t);
  LambdaSosResult res;
  res.equations = rel.sdp.num_constraints();
  res.unknowns = 1;
  for (int b : rel.sdp.block_sizes) {
    if (b > 0) res.unknowns += static_cast<long long>(b) * (b + 1) / 2;
  }
  res.solution = solve(rel.sdp, opts.solver);
  const SdpSolution& sol = res.solution;
  res.verdict.order = t;

  switch (sol.status) {
    case SdpStatus::DualInfeasible:
      // lambda unbounded above: B(x) >= lambda I on S_A for every lambda.
      res.value = std::numeric_limits<double>::infinity();
      res.verdict.kind = VerdictKind::Certified;
      res.verdict.value = res.value;
      res.verdict.note = "sos relaxation unbounded: inner spectrahedron is empty";
      return res;
    case SdpStatus::PrimalInfeasible:
      res.value = -std::numeric_limits<double>::infinity();
      res.verdict.value = res.value;
      res.verdict.kind = VerdictKind::Inconclusive;
      res.verdict.note = "sos relaxation infeasible at this order";
      return res;
    case SdpStatus::Optimal:
      break;
    case SdpStatus::Inaccurate:
    case SdpStatus::IterLimit: {
      const auto& r = sol.residuals;
      if (r.primal <= 1e-5 && r.dual <= 1e-5 && r.gap <= 1e-5) {
        res.verdict.note = "solver stopped early with small residuals";
        break;
      }
      std::ostringstream os;
      os << "sos relaxation order " << t << ": solver status " << to_string(sol.status)
         << " (primal " << r.primal << ", dual " << r.dual << ", gap " << r.gap << ")";
      throw NumericalFailure(os.str());
    }
  }
  res.value = rel.sdp.quantity(sol.raw_value());
  res.verdict.value = res.value;
  const double tol = opts.tol_cert * (1.0 + coeff_scale(cp.b));
  if (res.value >= -tol) {
    res.verdict.kind = VerdictKind::Certified;
  } else {
    res.verdict.kind = VerdictKind::Inconclusive;
    res.verdict.note = "negative sos value is only a lower bound";
  }
  return res;
}

}  // namespace spc
