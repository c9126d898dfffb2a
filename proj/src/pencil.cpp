#include "spc/pencil.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "spc/errors.hpp"

namespace spc {

LinearPencil::LinearPencil(std::vector<SymMatrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidInput("pencil needs at least the constant coefficient");
  const int k = coeffs_.front().dim();
  for (const auto& c : coeffs_) {
    if (c.dim() != k) throw InvalidInput("pencil coefficients must share one size");
  }
}

Eigen::MatrixXd LinearPencil::linear_part(const Eigen::VectorXd& x) const {
  if (x.size() != n()) {
    throw InvalidInput("point has " + std::to_string(x.size()) + " coordinates, pencil has " +
                       std::to_string(n()) + " variables");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k(), k());
  for (int p = 0; p < n(); ++p) m += x(p) * coeffs_[static_cast<std::size_t>(p + 1)].matrix();
  return m;
}

SymMatrix LinearPencil::evaluate(const Eigen::VectorXd& x) const {
  return SymMatrix(coeffs_.front().matrix() + linear_part(x));
}

bool LinearPencil::contains_point(const Eigen::VectorXd& x, double tol) const {
  return is_psd(evaluate(x), tol);
}

bool LinearPencil::is_monic() const {
  return coeffs_.front().matrix() == Eigen::MatrixXd::Identity(k(), k());
}

LinearPencil LinearPencil::scaled(double nu) const {
  if (!(nu > 0)) throw InvalidInput("scale factor must be positive");
  std::vector<SymMatrix> c;
  c.reserve(coeffs_.size());
  c.push_back(coeffs_.front());
  for (std::size_t p = 1; p < coeffs_.size(); ++p) c.push_back(coeffs_[p] * (1.0 / nu));
  return LinearPencil(std::move(c));
}

LinearPencil LinearPencil::substitute(const Eigen::VectorXd& offset,
                                      const Eigen::MatrixXd& basis) const {
  if (offset.size() != n() || basis.rows() != n()) {
    throw InvalidInput("substitute: dimension mismatch");
  }
  std::vector<SymMatrix> c;
  c.push_back(evaluate(offset));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    c.emplace_back(linear_part(basis.col(j)));
  }
  return LinearPencil(std::move(c));
}

LinearPencil LinearPencil::congruence(const Eigen::MatrixXd& v) const {
  if (v.rows() != k() || v.cols() == 0) throw InvalidInput("congruence: bad shape");
  std::vector<SymMatrix> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.emplace_back(v.transpose() * a.matrix() * v);
  return LinearPencil(std::move(c));
}

SymMatrix evaluate(const LinearPencil& p, const Eigen::VectorXd& x) { return p.evaluate(x); }

bool contains_point(const LinearPencil& p, const Eigen::VectorXd& x, double tol) {
  return p.contains_point(x, tol);
}

LinearPencil ellipsoid_pencil(const Eigen::VectorXd& semiaxes) {
  const int n = static_cast<int>(semiaxes.size());
  if (n == 0) throw InvalidInput("ellipsoid needs at least one semiaxis");
  std::vector<SymMatrix> c;
  c.push_back(SymMatrix::Identity(n + 1));
  for (int p = 0; p < n; ++p) {
    if (!(semiaxes(p) > 0)) throw InvalidInput("ellipsoid semiaxes must be positive");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m(p, n) = m(n, p) = 1.0 / semiaxes(p);
    c.emplace_back(m);
  }
  return LinearPencil(std::move(c));
}

LinearPencil ball_pencil(int n, double radius) {
  return ellipsoid_pencil(Eigen::VectorXd::Constant(n, radius));
}

LinearPencil polytope_pencil(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size() || a.rows() == 0) throw InvalidInput("polytope: A and b disagree");
  std::vector<SymMatrix> c;
  c.emplace_back(Eigen::MatrixXd(b.asDiagonal()));
  for (Eigen::Index p = 0; p < a.cols(); ++p) {
    c.emplace_back(Eigen::MatrixXd(a.col(p).asDiagonal()));
  }
  return LinearPencil(std::move(c));
}

LinearPencil elliptope_pencil(int k) {
  if (k < 2) throw InvalidInput("elliptope needs k >= 2");
  std::vector<SymMatrix> c;
  c.push_back(SymMatrix::Identity(k));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
      m(i, j) = m(j, i) = 1.0;
      c.emplace_back(m);
    }
  }
  return LinearPencil(std::move(c));
}

LinearPencil extend(const LinearPencil& p) {
  const int k = p.k();
  std::vector<SymMatrix> c;
  for (int q = 0; q <= p.n(); ++q) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
    m(0, 0) = q == 0 ? 1.0 : 0.0;
    m.bottomRightCorner(k, k) = p.coeff(q).matrix();
    c.emplace_back(m);
  }
  return LinearPencil(std::move(c));
}

LinearPencil random_pencil(const RandomPencilOptions& opts, std::uint64_t seed) {
  if (!(opts.density > 0 && opts.density <= 1)) throw InvalidInput("density must lie in (0,1]");
  if (!(opts.diag0 > 0)) throw InvalidInput("diag0 must be positive");
  if (opts.n < 0 || opts.k < 1) throw InvalidInput("random pencil needs n >= 0 and k >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<SymMatrix> c;
  for (int p = 0; p <= opts.n; ++p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(opts.k, opts.k);
    for (int i = 0; i < opts.k; ++i) {
      for (int j = i + 1; j < opts.k; ++j) {
        const double v = value(rng);
        const bool keep = coin(rng) < opts.density;
        if (keep) m(i, j) = m(j, i) = v;
      }
    }
    if (p == 0) m.diagonal().setConstant(opts.diag0);
    c.emplace_back(m);
  }
  return LinearPencil(std::move(c));
}

MapSpec::MapSpec(int k, int l, std::vector<Eigen::MatrixXd> unit_images)
    : k_(k), l_(l), images_(std::move(unit_images)) {
  if (k < 1 || l < 1) throw InvalidInput("map sizes must be positive");
  if (images_.size() != static_cast<std::size_t>(k * k)) {
    throw InvalidInput("map needs k*k unit images");
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const auto& im = unit_image(i, j);
      if (im.rows() != l || im.cols() != l) throw InvalidInput("unit image has wrong size");
      if ((im - unit_image(j, i).transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidInput("map must commute with transposition");
      }
    }
  }
}

MapSpec MapSpec::from_function(int k, int l,
                               const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& fn) {
  std::vector<Eigen::MatrixXd> images;
  images.reserve(static_cast<std::size_t>(k * k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
      e(i, j) = 1.0;
      images.push_back(fn(e));
    }
  }
  return MapSpec(k, l, std::move(images));
}

Eigen::MatrixXd MapSpec::apply(const Eigen::MatrixXd& a) const {
  if (a.rows() != k_ || a.cols() != k_) throw InvalidInput("map argument has wrong size");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(l_, l_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      if (a(i, j) != 0.0) out += a(i, j) * unit_image(i, j);
    }
  }
  return out;
}

SymMatrix MapSpec::apply(const SymMatrix& a) const { return SymMatrix(apply(a.matrix())); }

std::vector<SymMatrix> MapSpec::symmetric_basis_images() const {
  std::vector<SymMatrix> out;
  for (int i = 0; i < k_; ++i) {
    for (int j = i; j < k_; ++j) {
      if (i == j) {
        out.emplace_back(unit_image(i, i));
      } else {
        out.emplace_back(unit_image(i, j) + unit_image(j, i));
      }
    }
  }
  return out;
}

MapSpec identity_map(int k) {
  return MapSpec::from_function(k, k, [](const Eigen::MatrixXd& a) { return a; });
}

MapSpec trace_map(int k) {
  return MapSpec::from_function(k, 1, [](const Eigen::MatrixXd& a) {
    return Eigen::MatrixXd::Constant(1, 1, a.trace());
  });
}

MapSpec choi_type_map() {
  return MapSpec::from_function(3, 3, [](const Eigen::MatrixXd& a) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = a(0, 0) + a(1, 1);
    d(1, 1) = a(1, 1) + a(2, 2);
    d(2, 2) = a(2, 2) + a(0, 0);
    return Eigen::MatrixXd(2.0 * d - a);
  });
}

std::vector<SymMatrix> traceless_basis(int k) {
  if (k < 1) throw InvalidInput("traceless basis needs k >= 1");
  std::vector<SymMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
      m(i, j) = m(j, i) = s;
      out.emplace_back(m);
    }
  }
  for (int m = 1; m < k; ++m) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < m; ++i) d(i, i) = 1.0;
    d(m, m) = -static_cast<double>(m);
    out.emplace_back(d / std::sqrt(static_cast<double>(m * (m + 1))));
  }
  return out;
}

std::pair<LinearPencil, LinearPencil> map_to_pencils(const MapSpec& m) {
  const int k = m.k();
  std::vector<SymMatrix> a;
  std::vector<SymMatrix> b;
  const SymMatrix center = SymMatrix::Identity(k) * (1.0 / k);
  a.push_back(center);
  b.push_back(m.apply(center));
  for (const auto& g : traceless_basis(k)) {
    b.push_back(m.apply(g));
    a.push_back(g);
  }
  return {LinearPencil(std::move(a)), LinearPencil(std::move(b))};
}

Eigen::VectorXd slice_coordinates(const SymMatrix& a) {
  const auto basis = traceless_basis(a.dim());
  Eigen::VectorXd x(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = (basis[i].matrix().array() * a.matrix().array()).sum();
  }
  return x;
}

std::string pencil_to_json(const LinearPencil& p) {
  nlohmann::json j;
  j["n"] = p.n();
  j["k"] = p.k();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(p.k() * p.k()));
    for (int r = 0; r < p.k(); ++r) {
      for (int col = 0; col < p.k(); ++col) flat.push_back(c(r, col));
    }
    coeffs.push_back(flat);
  }
  j["coeffs"] = coeffs;
  return j.dump();
}

LinearPencil pencil_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed pencil JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("coeffs")) {
    throw InvalidInput("pencil JSON needs fields n, k, coeffs");
  }
  if (!j["n"].is_number_integer() || !j["k"].is_number_integer() || !j["coeffs"].is_array()) {
    throw InvalidInput("pencil JSON has wrongly typed fields");
  }
  const int n = j["n"].get<int>();
  const int k = j["k"].get<int>();
  if (n < 0 || k < 1) throw InvalidInput("pencil JSON needs n >= 0 and k >= 1");
  const auto& arr = j["coeffs"];
  if (arr.size() != static_cast<std::size_t>(n + 1)) {
    throw InvalidInput("pencil JSON must contain n+1 coefficient arrays");
  }
  std::vector<SymMatrix> coeffs;
  for (const auto& c : arr) {
    if (!c.is_array() || c.size() != static_cast<std::size_t>(k * k)) {
      throw InvalidInput("each coefficient must be a row-major array of k*k numbers");
    }
    Eigen::MatrixXd m(k, k);
    for (int r = 0; r < k; ++r) {
      for (int col = 0; col < k; ++col) {
        const auto& v = c[static_cast<std::size_t>(r * k + col)];
        if (!v.is_number()) throw InvalidInput("coefficient entries must be numbers");
        m(r, col) = v.get<double>();
      }
    }
    if (!m.allFinite()) throw InvalidInput("coefficient entries must be finite");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw InvalidInput("coefficient matrix is not symmetric");
    }
    coeffs.emplace_back(m);
  }
  return LinearPencil(std::move(coeffs));
}

LinearPencil read_pencil_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open pencil file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return pencil_from_json(ss.str());
}

void write_pencil_file(const LinearPencil& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write pencil file " + path);
  out << pencil_to_json(p) << "\n";
}

}  // namespace spc
