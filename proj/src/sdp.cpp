#include "spc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>

#include "spc/errors.hpp"

namespace spc {

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::PrimalInfeasible: return "primal_infeasible";
    case SdpStatus::DualInfeasible: return "dual_infeasible";
    case SdpStatus::Inaccurate: return "inaccurate";
    case SdpStatus::IterLimit: return "iteration_limit";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  const int nb = static_cast<int>(block_sizes.size());
  if (nb == 0) throw InvalidInput("SDP needs at least one block");
  for (int s : block_sizes) {
    if (s == 0) throw InvalidInput("SDP block size must be nonzero");
  }
  if (rhs.size() != num_constraints()) {
    throw InvalidInput("SDP right-hand side length differs from the constraint count");
  }
  if (!rhs.allFinite() || !std::isfinite(offset)) {
    throw InvalidInput("SDP data must be finite");
  }
  auto check = [&](const SparseBlockMatrix& m) {
    for (const auto& e : m) {
      if (e.block < 0 || e.block >= nb) throw InvalidInput("SDP entry references a missing block");
      const int dim = std::abs(block_sizes[static_cast<std::size_t>(e.block)]);
      if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim) {
        throw InvalidInput("SDP entry index out of range");
      }
      if (e.row > e.col) throw InvalidInput("SDP entries must lie in the upper triangle");
      if (block_sizes[static_cast<std::size_t>(e.block)] < 0 && e.row != e.col) {
        throw InvalidInput("off-diagonal entry in a diagonal block");
      }
      if (!std::isfinite(e.value)) throw InvalidInput("SDP data must be finite");
    }
  };
  check(objective);
  for (const auto& a : constraints) check(a);
}

namespace {

void canonicalize_matrix(SparseBlockMatrix& m) {
  std::sort(m.begin(), m.end(), [](const SdpEntry& a, const SdpEntry& b) {
    return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
  });
  SparseBlockMatrix out;
  out.reserve(m.size());
  for (const auto& e : m) {
    if (!out.empty() && out.back().block == e.block && out.back().row == e.row &&
        out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SdpEntry& e) { return e.value == 0.0; });
  m = std::move(out);
}

}  // namespace

void SdpProblem::canonicalize() {
  canonicalize_matrix(objective);
  for (auto& a : constraints) canonicalize_matrix(a);
}

std::vector<Eigen::MatrixXd> to_dense(const SdpProblem& p, const SparseBlockMatrix& m) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(p.block_sizes.size());
  for (int s : p.block_sizes) out.push_back(Eigen::MatrixXd::Zero(std::abs(s), std::abs(s)));
  for (const auto& e : m) {
    auto& blk = out[static_cast<std::size_t>(e.block)];
    blk(e.row, e.col) += e.value;
    if (e.row != e.col) blk(e.col, e.row) += e.value;
  }
  return out;
}

double inner(const SparseBlockMatrix& m, const std::vector<Eigen::MatrixXd>& x) {
  double s = 0.0;
  for (const auto& e : m) {
    const double v = x[static_cast<std::size_t>(e.block)](e.row, e.col);
    s += e.row == e.col ? e.value * v : 2.0 * e.value * v;
  }
  return s;
}

namespace {

double block_min_eig(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return es.eigenvalues()(0);
}

double min_eig_blocks(const SdpProblem& p, const std::vector<Eigen::MatrixXd>& blocks) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (p.block_sizes[b] < 0) {
      lo = std::min(lo, blocks[b].diagonal().minCoeff());
    } else {
      lo = std::min(lo, block_min_eig(blocks[b]));
    }
  }
  return lo;
}

double frob(const std::vector<Eigen::MatrixXd>& blocks) {
  double s = 0.0;
  for (const auto& b : blocks) s += b.squaredNorm();
  return std::sqrt(s);
}

std::vector<Eigen::MatrixXd> combine(const SdpProblem& p, const Eigen::VectorXd& y) {
  // sum_i y_i A_i - C
  auto out = to_dense(p, p.objective);
  for (auto& b : out) b = -b;
  for (int i = 0; i < p.num_constraints(); ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& e : p.constraints[static_cast<std::size_t>(i)]) {
      auto& blk = out[static_cast<std::size_t>(e.block)];
      blk(e.row, e.col) += y(i) * e.value;
      if (e.row != e.col) blk(e.col, e.row) += y(i) * e.value;
    }
  }
  return out;
}

}  // namespace

SdpResiduals compute_residuals(const SdpProblem& p, const std::vector<Eigen::MatrixXd>& x,
                               const Eigen::VectorXd& y) {
  if (x.size() != p.block_sizes.size() || y.size() != p.num_constraints()) {
    throw InvalidInput("residual check: iterate shape does not match the problem");
  }
  SdpResiduals r;
  Eigen::VectorXd ax(p.num_constraints());
  for (int i = 0; i < p.num_constraints(); ++i) ax(i) = inner(p.constraints[static_cast<std::size_t>(i)], x);
  const double xneg = std::max(0.0, -min_eig_blocks(p, x));
  r.primal = (ax - p.rhs).norm() / (1.0 + p.rhs.norm()) + xneg;

  const double cnorm = frob(to_dense(p, p.objective));
  const double zneg = std::max(0.0, -min_eig_blocks(p, combine(p, y)));
  r.dual = zneg / (1.0 + cnorm);

  const double pv = inner(p.objective, x);
  const double dv = p.rhs.dot(y);
  r.gap = std::abs(pv - dv) / (1.0 + std::abs(pv) + std::abs(dv));
  return r;
}

namespace {

using Blocks = std::vector<Eigen::MatrixXd>;

struct Term {
  int row;
  int col;
  double value;
};

// One constraint restricted to one block.
struct Piece {
  int con;
  std::vector<Term> terms;
};

// Scaled min-form data: min <C,X> s.t. A(X) = b, X PSD, with C = -C_orig.
// Diagonal blocks store vectors as dim x 1 matrices.
struct Model {
  int m = 0;
  std::vector<int> dim;
  std::vector<char> diag;
  std::vector<std::vector<Piece>> pieces;
  Blocks c;
  Eigen::VectorXd b;
  Eigen::VectorXd row_scale;
  double sb = 1.0;
  double sc = 1.0;
  int barrier = 0;
};

Blocks zeros(const Model& md) {
  Blocks out;
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    out.push_back(md.diag[k] ? Eigen::MatrixXd::Zero(md.dim[k], 1)
                             : Eigen::MatrixXd::Zero(md.dim[k], md.dim[k]));
  }
  return out;
}

Blocks identity(const Model& md) {
  Blocks out;
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    if (md.diag[k]) {
      out.push_back(Eigen::MatrixXd::Ones(md.dim[k], 1));
    } else {
      out.push_back(Eigen::MatrixXd::Identity(md.dim[k], md.dim[k]));
    }
  }
  return out;
}

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

void axpy(Blocks& y, double a, const Blocks& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

Eigen::VectorXd apply_a(const Model& md, const Blocks& x) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(md.m);
  for (std::size_t k = 0; k < md.pieces.size(); ++k) {
    const auto& xb = x[k];
    for (const auto& pc : md.pieces[k]) {
      double s = 0.0;
      if (md.diag[k]) {
        for (const auto& t : pc.terms) s += t.value * xb(t.row, 0);
      } else {
        for (const auto& t : pc.terms) {
          s += (t.row == t.col ? 1.0 : 2.0) * t.value * xb(t.row, t.col);
        }
      }
      r(pc.con) += s;
    }
  }
  return r;
}

// out += s * sum_i y_i A_i
void add_at(const Model& md, const Eigen::VectorXd& y, double s, Blocks& out) {
  for (std::size_t k = 0; k < md.pieces.size(); ++k) {
    auto& ob = out[k];
    for (const auto& pc : md.pieces[k]) {
      const double yi = s * y(pc.con);
      if (yi == 0.0) continue;
      if (md.diag[k]) {
        for (const auto& t : pc.terms) ob(t.row, 0) += yi * t.value;
      } else {
        for (const auto& t : pc.terms) {
          ob(t.row, t.col) += yi * t.value;
          if (t.row != t.col) ob(t.col, t.row) += yi * t.value;
        }
      }
    }
  }
}

Model build_model(const SdpProblem& src) {
  SdpProblem p = src;
  p.canonicalize();
  Model md;
  md.m = p.num_constraints();
  for (int s : p.block_sizes) {
    md.dim.push_back(std::abs(s));
    md.diag.push_back(s < 0 ? 1 : 0);
    md.barrier += std::abs(s);
  }
  md.pieces.resize(md.dim.size());
  md.row_scale = Eigen::VectorXd::Ones(md.m);
  md.b = p.rhs;
  for (int i = 0; i < md.m; ++i) {
    const auto& a = p.constraints[static_cast<std::size_t>(i)];
    double nrm = 0.0;
    for (const auto& e : a) nrm += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    nrm = std::sqrt(nrm);
    if (nrm > 0.0) md.row_scale(i) = nrm;
    const double inv = 1.0 / md.row_scale(i);
    for (const auto& e : a) {
      auto& list = md.pieces[static_cast<std::size_t>(e.block)];
      if (list.empty() || list.back().con != i) list.push_back(Piece{i, {}});
      list.back().terms.push_back(Term{e.row, e.col, e.value * inv});
    }
    md.b(i) *= inv;
  }
  md.c = zeros(md);
  for (const auto& e : p.objective) {
    auto& cb = md.c[static_cast<std::size_t>(e.block)];
    if (md.diag[static_cast<std::size_t>(e.block)]) {
      cb(e.row, 0) -= e.value;
    } else {
      cb(e.row, e.col) -= e.value;
      if (e.row != e.col) cb(e.col, e.row) -= e.value;
    }
  }
  md.sb = std::max(1.0, md.b.lpNorm<Eigen::Infinity>());
  double cmax = 0.0;
  for (const auto& cb : md.c) cmax = std::max(cmax, cb.cwiseAbs().maxCoeff());
  md.sc = std::max(1.0, cmax);
  md.b /= md.sb;
  for (auto& cb : md.c) cb /= md.sc;
  return md;
}

// Nesterov-Todd scaling of one block: W Z W = X, W = G G^T,
// G^{-1} X G^{-T} = G^T Z G = diag(lambda).
struct Scaling {
  Eigen::MatrixXd g;
  Eigen::MatrixXd ginvt;
  Eigen::MatrixXd w;  // W (dense) or sqrt(x/z) (diagonal blocks)
  Eigen::VectorXd lambda;
};

bool nt_scaling(const Model& md, const Blocks& x, const Blocks& z, std::vector<Scaling>& out) {
  out.resize(md.dim.size());
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    auto& s = out[k];
    if (md.diag[k]) {
      if ((x[k].array() <= 0.0).any() || (z[k].array() <= 0.0).any()) return false;
      s.w = (x[k].array() / z[k].array()).sqrt().matrix();
      s.lambda = (x[k].array() * z[k].array()).sqrt().matrix();
      continue;
    }
    Eigen::LLT<Eigen::MatrixXd> lx(x[k]);
    Eigen::LLT<Eigen::MatrixXd> lz(z[k]);
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    const Eigen::MatrixXd lxm = lx.matrixL();
    const Eigen::MatrixXd lzm = lz.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lzm.transpose() * lxm,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sig = svd.singularValues();
    if (!(sig.minCoeff() > 0.0) || !sig.allFinite()) return false;
    const Eigen::VectorXd isq = sig.cwiseSqrt().cwiseInverse();
    s.g = lxm * svd.matrixV() * isq.asDiagonal();
    s.ginvt = lzm * svd.matrixU() * isq.asDiagonal();
    s.w = s.g * s.g.transpose();
    s.lambda = sig;
  }
  return true;
}

// W V W for each block.
Blocks sandwich(const Model& md, const std::vector<Scaling>& sc, const Blocks& v) {
  Blocks out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (md.diag[k]) {
      out[k] = (sc[k].w.array().square() * v[k].array()).matrix();
    } else {
      out[k] = sc[k].w * v[k] * sc[k].w;
      out[k] = 0.5 * (out[k] + out[k].transpose());
    }
  }
  return out;
}

Eigen::MatrixXd schur(const Model& md, const std::vector<Scaling>& sc) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(md.m, md.m);
  for (std::size_t k = 0; k < md.pieces.size(); ++k) {
    const auto& pcs = md.pieces[k];
    if (pcs.empty()) continue;
    if (md.diag[k]) {
      std::vector<std::vector<std::pair<int, double>>> at(static_cast<std::size_t>(md.dim[k]));
      for (const auto& pc : pcs) {
        for (const auto& t : pc.terms) at[static_cast<std::size_t>(t.row)].push_back({pc.con, t.value});
      }
      for (std::size_t pos = 0; pos < at.size(); ++pos) {
        const double w2 = sc[k].w(static_cast<Eigen::Index>(pos), 0) * sc[k].w(static_cast<Eigen::Index>(pos), 0);
        for (const auto& [i, a] : at[pos]) {
          for (const auto& [j, c] : at[pos]) m(i, j) += a * c * w2;
        }
      }
      continue;
    }
    const Eigen::MatrixXd& w = sc[k].w;
    std::vector<int> idx;
    std::vector<int> local(static_cast<std::size_t>(md.dim[k]), -1);
    for (std::size_t jj = 0; jj < pcs.size(); ++jj) {
      const auto& pj = pcs[jj];
      idx.clear();
      for (const auto& t : pj.terms) {
        for (int r : {t.row, t.col}) {
          if (local[static_cast<std::size_t>(r)] < 0) {
            local[static_cast<std::size_t>(r)] = static_cast<int>(idx.size());
            idx.push_back(r);
          }
        }
      }
      const auto s = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd asub = Eigen::MatrixXd::Zero(s, s);
      for (const auto& t : pj.terms) {
        const int a = local[static_cast<std::size_t>(t.row)];
        const int b = local[static_cast<std::size_t>(t.col)];
        asub(a, b) += t.value;
        if (a != b) asub(b, a) += t.value;
      }
      for (int r : idx) local[static_cast<std::size_t>(r)] = -1;
      const Eigen::MatrixXd wj = w(Eigen::all, idx);
      const Eigen::MatrixXd tmat = wj * asub * wj.transpose();
      for (std::size_t ii = 0; ii <= jj; ++ii) {
        const auto& pi = pcs[ii];
        double v = 0.0;
        for (const auto& t : pi.terms) {
          v += (t.row == t.col ? 1.0 : 2.0) * t.value * tmat(t.row, t.col);
        }
        m(pi.con, pj.con) += v;
        if (pi.con != pj.con) m(pj.con, pi.con) += v;
      }
    }
  }
  return m;
}

struct Direction {
  Blocks dx;
  Blocks dz;
  Eigen::VectorXd dy;
  double dtau = 0.0;
  double dkappa = 0.0;
  Blocks dx_s;  // scaled directions (G^{-1} dX G^{-T}, G^T dZ G)
  Blocks dz_s;
};

// Right-hand side of the linearized complementarity in original space,
// R_c = G D G^T with Lambda D + D Lambda = 2 sigma mu I - 2 Lambda^2 - corr.
Blocks complementarity_rhs(const Model& md, const std::vector<Scaling>& sc, double target,
                           const Direction* aff) {
  Blocks out(md.dim.size());
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    const Eigen::VectorXd& lam = sc[k].lambda;
    if (md.diag[k]) {
      Eigen::ArrayXd rhs = target - lam.array().square();
      if (aff) rhs -= aff->dx[k].array() * aff->dz[k].array();
      out[k] = (sc[k].w.array() * rhs / lam.array()).matrix();
      continue;
    }
    const auto n = lam.size();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
    rhs.diagonal().setConstant(2.0 * target);
    rhs.diagonal() -= 2.0 * lam.array().square().matrix();
    if (aff) {
      const Eigen::MatrixXd p = aff->dx_s[k] * aff->dz_s[k];
      rhs -= p + p.transpose();
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) rhs(i, j) /= lam(i) + lam(j);
    }
    out[k] = sc[k].g * rhs * sc[k].g.transpose();
    out[k] = 0.5 * (out[k] + out[k].transpose());
  }
  return out;
}

void scale_direction(const Model& md, const std::vector<Scaling>& sc, Direction& d) {
  d.dx_s.resize(md.dim.size());
  d.dz_s.resize(md.dim.size());
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    if (md.diag[k]) {
      d.dx_s[k] = (d.dx[k].array() / sc[k].w.array()).matrix();
      d.dz_s[k] = (d.dz[k].array() * sc[k].w.array()).matrix();
    } else {
      d.dx_s[k] = sc[k].ginvt.transpose() * d.dx[k] * sc[k].ginvt;
      d.dz_s[k] = sc[k].g.transpose() * d.dz[k] * sc[k].g;
    }
  }
}

double max_step(const Model& md, const std::vector<Scaling>& sc, const Direction& d, double tau,
                double kappa) {
  double alpha = std::numeric_limits<double>::infinity();
  auto ratio = [&](double v, double dv) {
    if (dv < 0.0) alpha = std::min(alpha, -v / dv);
  };
  ratio(tau, d.dtau);
  ratio(kappa, d.dkappa);
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    const Eigen::VectorXd& lam = sc[k].lambda;
    if (md.diag[k]) {
      // x = w lambda, z = lambda / w
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        ratio(lam(i), d.dx_s[k](i, 0));
        ratio(lam(i), d.dz_s[k](i, 0));
      }
      continue;
    }
    const Eigen::VectorXd is = lam.cwiseSqrt().cwiseInverse();
    for (const Eigen::MatrixXd* dm : {&d.dx_s[k], &d.dz_s[k]}) {
      Eigen::MatrixXd t = is.asDiagonal() * (*dm) * is.asDiagonal();
      t = 0.5 * (t + t.transpose());
      const double lo = block_min_eig(t);
      if (!std::isfinite(lo)) return 0.0;
      if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
    }
  }
  return alpha;
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
  p.validate();
  const Model md = build_model(p);
  const int m = md.m;

  SdpSolution sol;
  sol.y = Eigen::VectorXd::Zero(m);
  auto finish_zero_blocks = [&] {
    sol.x = to_dense(p, {});
    sol.z = combine(p, sol.y);
  };

  // Trivially inconsistent rows: A_i = 0 with b_i != 0.
  for (int i = 0; i < m; ++i) {
    if (p.constraints[static_cast<std::size_t>(i)].empty() && p.rhs(i) != 0.0) {
      sol.status = SdpStatus::PrimalInfeasible;
      sol.y(i) = -1.0 / p.rhs(i);
      finish_zero_blocks();
      sol.dual_value = -1.0;
      return sol;
    }
  }

  const double borig = p.rhs.norm();
  const double corig = frob(to_dense(p, p.objective));

  Blocks x = identity(md);
  Blocks z = identity(md);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double tau = 1.0;
  double kappa = 1.0;
  const double nu = static_cast<double>(md.barrier) + 1.0;

  std::vector<Scaling> sc;
  SdpStatus status = SdpStatus::IterLimit;
  int iter = 0;
  // Late iterates can degrade once the step stalls; stalled runs report the
  // iterate with the smallest max(pres, dres, gap) instead of the last one.
  struct Snapshot {
    Blocks x;
    Eigen::VectorXd y;
    double tau = 1.0;
    double score = std::numeric_limits<double>::infinity();
  } best;
  for (; iter <= opts.max_iter; ++iter) {
    // Residuals of the embedding.
    const Eigen::VectorXd ax = apply_a(md, x);
    const Eigen::VectorXd rp = md.b * tau - ax;
    Blocks rd = md.c;
    for (auto& blk : rd) blk *= tau;
    add_at(md, y, -1.0, rd);
    axpy(rd, -1.0, z);
    const double cx = dot(md.c, x);
    const double by = md.b.dot(y);
    const double rg = kappa - by + cx;
    const double mu = (dot(x, z) + tau * kappa) / nu;

    // Convergence tests in the units of the original data.
    const double pres = (rp.cwiseProduct(md.row_scale)).norm() * md.sb / tau / (1.0 + borig);
    const double dres = norm(rd) * md.sc / tau / (1.0 + corig);
    const double pobj = md.sb * md.sc * cx / tau;
    const double dobj = md.sb * md.sc * by / tau;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (opts.verbose) {
      std::fprintf(stderr, "%3d pobj %+.8e dobj %+.8e pres %.2e dres %.2e gap %.2e tau %.2e kap %.2e\n",
                   iter, -pobj, -dobj, pres, dres, gap, tau, kappa);
    }
    if (pres <= opts.tol_feas && dres <= opts.tol_feas && gap <= opts.tol_gap) {
      status = SdpStatus::Optimal;
      break;
    }
    if (const double score = std::max({pres, dres, gap}); score < best.score) {
      best.x = x;
      best.y = y;
      best.tau = tau;
      best.score = score;
    }
    if (by > 0.0) {
      Blocks aty = zeros(md);
      add_at(md, y, 1.0, aty);
      axpy(aty, 1.0, z);
      if (norm(aty) / (md.sb * by) <= opts.tol_feas) {
        status = SdpStatus::PrimalInfeasible;
        break;
      }
    }
    if (cx < 0.0) {
      const double ratio = ax.cwiseProduct(md.row_scale).norm() / (md.sc * -cx);
      if (ratio <= opts.tol_feas) {
        status = SdpStatus::DualInfeasible;
        break;
      }
    }
    if (iter == opts.max_iter) {
      status = SdpStatus::IterLimit;
      break;
    }
    if (!std::isfinite(mu) || mu <= 0.0 || !nt_scaling(md, x, z, sc)) {
      status = SdpStatus::Inaccurate;
      break;
    }

    // Schur complement and the fixed parts of the Newton system.
    Eigen::MatrixXd schur_m = schur(md, sc);
    Eigen::LLT<Eigen::MatrixXd> llt;
    {
      const double dmax = m > 0 ? schur_m.diagonal().cwiseAbs().maxCoeff() : 1.0;
      double reg = 0.0;
      for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd mm = schur_m;
        if (reg > 0.0) mm.diagonal().array() += reg;
        llt.compute(mm);
        if (llt.info() == Eigen::Success) break;
        reg = reg == 0.0 ? 1e-14 * std::max(dmax, 1.0) : reg * 100.0;
      }
      if (llt.info() != Eigen::Success) {
        status = SdpStatus::Inaccurate;
        break;
      }
    }
    const Blocks wcw = sandwich(md, sc, md.c);
    const Eigen::VectorXd g = apply_a(md, wcw);
    const double cw = dot(md.c, wcw);
    const Eigen::VectorXd v = llt.solve(md.b + g);
    const Eigen::VectorXd bmg = md.b - g;
    const double denom = bmg.dot(v) + cw + kappa / tau;
    const Blocks wrdw = sandwich(md, sc, rd);
    const Eigen::VectorXd a_wrdw = apply_a(md, wrdw);
    const double c_wrdw = dot(md.c, wrdw);

    auto direction = [&](double eta, const Blocks& rc, double rtk) {
      Direction d;
      const Eigen::VectorXd h1 = eta * rp - apply_a(md, rc) + eta * a_wrdw;
      const double h2 = eta * rg + dot(md.c, rc) - eta * c_wrdw + rtk / tau;
      const Eigen::VectorXd u = llt.solve(h1);
      d.dtau = (h2 - bmg.dot(u)) / denom;
      d.dy = u + v * d.dtau;
      d.dz = rd;
      for (auto& blk : d.dz) blk *= eta;
      add_at(md, d.dy, -1.0, d.dz);
      axpy(d.dz, d.dtau, md.c);
      d.dx = rc;
      axpy(d.dx, -1.0, sandwich(md, sc, d.dz));
      d.dkappa = (rtk - kappa * d.dtau) / tau;
      scale_direction(md, sc, d);
      return d;
    };

    // Predictor.
    const Direction aff = direction(1.0, complementarity_rhs(md, sc, 0.0, nullptr), -tau * kappa);
    const double alpha_aff = std::min(1.0, max_step(md, sc, aff, tau, kappa));
    Blocks xa = x;
    Blocks za = z;
    axpy(xa, alpha_aff, aff.dx);
    axpy(za, alpha_aff, aff.dz);
    const double mu_aff = (dot(xa, za) + (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa)) / nu;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const Direction d = direction(1.0 - sigma, complementarity_rhs(md, sc, sigma * mu, &aff),
                                  sigma * mu - tau * kappa - aff.dtau * aff.dkappa);
    double alpha = std::min(1.0, 0.98 * max_step(md, sc, d, tau, kappa));
    if (!(alpha > 1e-12)) {
      status = SdpStatus::Inaccurate;
      break;
    }

    bool accepted = false;
    for (int back = 0; back < 30 && !accepted; ++back, alpha *= 0.8) {
      Blocks xn = x;
      Blocks zn = z;
      axpy(xn, alpha, d.dx);
      axpy(zn, alpha, d.dz);
      for (std::size_t k = 0; k < xn.size(); ++k) {
        if (!md.diag[k]) {
          xn[k] = 0.5 * (xn[k] + xn[k].transpose());
          zn[k] = 0.5 * (zn[k] + zn[k].transpose());
        }
      }
      const double tn = tau + alpha * d.dtau;
      const double kn = kappa + alpha * d.dkappa;
      std::vector<Scaling> probe;
      if (tn > 0.0 && kn > 0.0 && nt_scaling(md, xn, zn, probe)) {
        x = std::move(xn);
        z = std::move(zn);
        y += alpha * d.dy;
        tau = tn;
        kappa = kn;
        accepted = true;
      }
    }
    if (!accepted) {
      status = SdpStatus::Inaccurate;
      break;
    }
  }
  sol.iterations = std::min(iter, opts.max_iter);
  if ((status == SdpStatus::Inaccurate || status == SdpStatus::IterLimit) && std::isfinite(best.score)) {
    x = std::move(best.x);
    y = std::move(best.y);
    tau = best.tau;
  }

  // Back to the original data and sign convention (y_orig = -y_min).
  Eigen::VectorXd yo(m);
  for (int i = 0; i < m; ++i) yo(i) = -md.sc * y(i) / md.row_scale(i);
  Blocks xo(md.dim.size());
  for (std::size_t k = 0; k < md.dim.size(); ++k) {
    Eigen::MatrixXd blk = md.diag[k] ? Eigen::MatrixXd(x[k].col(0).asDiagonal()) : x[k];
    xo[k] = blk * md.sb;
  }

  sol.status = status;
  if (status == SdpStatus::PrimalInfeasible) {
    const double byo = p.rhs.dot(yo);
    sol.y = yo / -byo;
    sol.x = to_dense(p, {});
    sol.z = combine(p, sol.y);
    // certificate: sum y_i A_i PSD, b^T y = -1
    auto ray = sol.z;
    auto cdense = to_dense(p, p.objective);
    for (std::size_t k = 0; k < ray.size(); ++k) ray[k] += cdense[k];
    sol.infeasibility_residual = std::max(0.0, -min_eig_blocks(p, ray));
    sol.dual_value = p.rhs.dot(sol.y);
    sol.primal_value = 0.0;
    if (sol.infeasibility_residual > opts.tol_feas * 10.0) sol.status = SdpStatus::Inaccurate;
    sol.residuals = compute_residuals(p, sol.x, sol.y);
    return sol;
  }
  if (status == SdpStatus::DualInfeasible) {
    const double cxo = inner(p.objective, xo);
    for (auto& blk : xo) blk /= cxo;
    sol.x = xo;
    sol.y = Eigen::VectorXd::Zero(m);
    sol.z = combine(p, sol.y);
    Eigen::VectorXd ax(m);
    for (int i = 0; i < m; ++i) ax(i) = inner(p.constraints[static_cast<std::size_t>(i)], sol.x);
    sol.infeasibility_residual = ax.norm() + std::max(0.0, -min_eig_blocks(p, sol.x));
    sol.primal_value = 1.0;
    if (sol.infeasibility_residual > opts.tol_feas * 10.0) sol.status = SdpStatus::Inaccurate;
    sol.residuals = compute_residuals(p, sol.x, sol.y);
    return sol;
  }

  for (auto& blk : xo) blk /= tau;
  sol.x = std::move(xo);
  sol.y = yo / tau;
  sol.z = combine(p, sol.y);
  sol.primal_value = inner(p.objective, sol.x);
  sol.dual_value = p.rhs.dot(sol.y);
  sol.residuals = compute_residuals(p, sol.x, sol.y);
  return sol;
}

std::string export_sdpa(const SdpProblem& src) {
  src.validate();
  SdpProblem p = src;
  p.canonicalize();
  std::string out;
  char buf[128];
  if (!p.origin.empty()) {
    std::string line = p.origin;
    std::replace(line.begin(), line.end(), '\n', ' ');
    out += "* " + line + "\n";
  }
  out += std::to_string(p.num_constraints()) + "\n";
  out += std::to_string(p.block_sizes.size()) + "\n";
  for (std::size_t k = 0; k < p.block_sizes.size(); ++k) {
    out += (k ? " " : "") + std::to_string(p.block_sizes[k]);
  }
  out += "\n";
  for (int i = 0; i < p.num_constraints(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? " " : "", p.rhs(i));
    out += buf;
  }
  out += "\n";
  auto emit = [&](int matno, const SparseBlockMatrix& mat) {
    for (const auto& e : mat) {
      std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g\n", matno, e.block + 1, e.row + 1,
                    e.col + 1, e.value);
      out += buf;
    }
  };
  emit(0, p.objective);
  for (int i = 0; i < p.num_constraints(); ++i) emit(i + 1, p.constraints[static_cast<std::size_t>(i)]);
  return out;
}

SdpProblem parse_sdpa(std::string_view text) {
  SdpProblem p;
  std::string body;
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (header && !line.empty() && (line[0] == '"' || line[0] == '*')) {
      std::string_view c = line.substr(1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      if (!c.empty() && c.back() == '\r') c.remove_suffix(1);
      if (!c.empty() && c.back() == '"') c.remove_suffix(1);
      if (p.origin.empty()) p.origin = std::string(c);
      continue;
    }
    header = false;
    body.append(line);
    body.push_back('\n');
  }
  for (char& ch : body) {
    if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
  }
  std::istringstream in(body);
  auto next = [&](const char* what) {
    std::string tok;
    if (!(in >> tok)) throw InvalidInput(std::string("SDPA: missing ") + what);
    return tok;
  };
  auto to_int = [](const std::string& s) {
    char* endp = nullptr;
    const long v = std::strtol(s.c_str(), &endp, 10);
    if (endp == s.c_str() || *endp != '\0') throw InvalidInput("SDPA: expected an integer, got '" + s + "'");
    return static_cast<int>(v);
  };
  auto to_double = [](const std::string& s) {
    char* endp = nullptr;
    const double v = std::strtod(s.c_str(), &endp);
    if (endp == s.c_str() || *endp != '\0') throw InvalidInput("SDPA: expected a number, got '" + s + "'");
    return v;
  };
  const int m = to_int(next("mDIM"));
  const int nb = to_int(next("nBLOCK"));
  if (m < 0 || nb <= 0) throw InvalidInput("SDPA: invalid mDIM or nBLOCK");
  for (int k = 0; k < nb; ++k) p.block_sizes.push_back(to_int(next("block size")));
  p.rhs.resize(m);
  for (int i = 0; i < m; ++i) p.rhs(i) = to_double(next("objective vector"));
  p.constraints.resize(static_cast<std::size_t>(m));
  std::string tok;
  while (in >> tok) {
    const int matno = to_int(tok);
    const int blk = to_int(next("block number")) - 1;
    int r = to_int(next("row")) - 1;
    int c = to_int(next("column")) - 1;
    const double v = to_double(next("value"));
    if (matno < 0 || matno > m) throw InvalidInput("SDPA: matrix number out of range");
    if (r > c) std::swap(r, c);
    SdpEntry e{blk, r, c, v};
    if (matno == 0) {
      p.objective.push_back(e);
    } else {
      p.constraints[static_cast<std::size_t>(matno - 1)].push_back(e);
    }
  }
  p.validate();
  p.canonicalize();
  return p;
}

}  // namespace spc
