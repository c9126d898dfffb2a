// SVG raster of two spectrahedra in a plane: S_A light grey drawn over S_B
// dark grey. Slices test membership pointwise, projections by a feasibility
// probe over the free variables.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "common.hpp"

namespace cli {

namespace {

enum class Cell : char { Outside, InA, InB, Unknown };

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Orthonormal basis of the complement of span{w1, w2} (Gram-Schmidt on the
// unit vectors), as an n x (n-2) row-major matrix.
Vec complement_basis(const Vec& w1, const Vec& w2) {
  const std::size_t n = w1.size();
  std::vector<Vec> q;
  auto push = [&](Vec v) {
    for (const auto& b : q) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    const double nv = std::sqrt(dot(v, v));
    if (nv < 1e-8) return false;
    for (auto& x : v) x /= nv;
    q.push_back(std::move(v));
    return true;
  };
  push(w1);
  push(w2);
  const std::size_t fixed = q.size();
  for (std::size_t i = 0; i < n && q.size() < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    push(e);
  }
  const std::size_t m = q.size() - fixed;
  Vec basis(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) basis[i * m + j] = q[fixed + j][i];
  }
  return basis;
}

struct Plane {
  Vec w1, w2, base;
  double g11, g12, g22, det;

  // Point base + s w1 + r w2 with w1.x = u and w2.x = v.
  Vec point(double u, double v) const {
    const double du = u - dot(w1, base);
    const double dv = v - dot(w2, base);
    const double s = (g22 * du - g12 * dv) / det;
    const double r = (g11 * dv - g12 * du) / det;
    Vec x = base;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * w1[i] + r * w2[i];
    return x;
  }
};

// 1 inside, 0 outside, -1 unknown.
int slice_member(const spc_pencil* p, const Vec& x) {
  double lam = 0.0;
  if (spc_pencil_min_eig(p, x.data(), x.size(), &lam) != SPC_OK) return -1;
  return lam >= -1e-9 ? 1 : 0;
}

int projection_member(const spc_pencil* p, const Vec& x0, const Vec& basis, int m) {
  spc_pencil* sub = nullptr;
  if (spc_pencil_substitute(p, x0.data(), basis.data(), m, &sub) != SPC_OK) return -1;
  Pencil owned(sub);
  int outcome = SPC_PROBE_UNKNOWN;
  if (spc_probe(sub, &outcome, nullptr, 0, nullptr) != SPC_OK) return -1;
  if (outcome == SPC_PROBE_NONEMPTY) return 1;
  if (outcome == SPC_PROBE_EMPTY) return 0;
  return -1;
}

void auto_range(const spc_pencil* a, const spc_pencil* b, const Vec& w, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const spc_pencil* p : {a, b}) {
    double l = 0.0;
    double h = 0.0;
    if (spc_pencil_extent(p, w.data(), w.size(), &l, &h) != SPC_OK) continue;
    if (std::isfinite(l)) lo = std::min(lo, l);
    if (std::isfinite(h)) hi = std::max(hi, h);
  }
  if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - 4.0 : -2.0;
  if (!std::isfinite(hi)) hi = lo + 4.0;
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

const char* colour(Cell c) {
  switch (c) {
    case Cell::InA: return "#c8c8c8";
    case Cell::InB: return "#606060";
    case Cell::Unknown: return "#d62728";
    case Cell::Outside: break;
  }
  return "#ffffff";
}

}  // namespace

int run_render(const std::string& a_path, const std::string& b_path, const std::string& out, int plane_i,
               int plane_j, const std::string& mode, int grid, const std::string& axis1,
               const std::string& axis2, const std::string& at, const std::vector<double>& range) {
  Pencil a = read_pencil(a_path);
  Pencil b = read_pencil(b_path);
  const int n = spc_pencil_n(a.get());
  if (spc_pencil_n(b.get()) != n) throw Failure(kExitInput, "pencils have different variable counts");
  if (n < 2) throw Failure(kExitUnsupported, "render needs at least two variables");
  const bool project = mode == "project";
  if (grid <= 0) grid = project ? 60 : 160;

  auto axis = [&](const std::string& spec, int idx) {
    Vec w(static_cast<std::size_t>(n), 0.0);
    if (spec.empty()) {
      if (idx < 0 || idx >= n) throw Failure(kExitInput, "plane index out of range");
      w[static_cast<std::size_t>(idx)] = 1.0;
      return w;
    }
    w = parse_list(spec);
    if (static_cast<int>(w.size()) != n) throw Failure(kExitInput, "axis weights need n entries");
    return w;
  };
  Plane pl;
  pl.w1 = axis(axis1, plane_i);
  pl.w2 = axis(axis2, plane_j);
  pl.base = at.empty() ? Vec(static_cast<std::size_t>(n), 0.0) : parse_list(at);
  if (static_cast<int>(pl.base.size()) != n) throw Failure(kExitInput, "--at needs n entries");
  if (project) std::fill(pl.base.begin(), pl.base.end(), 0.0);
  pl.g11 = dot(pl.w1, pl.w1);
  pl.g12 = dot(pl.w1, pl.w2);
  pl.g22 = dot(pl.w2, pl.w2);
  pl.det = pl.g11 * pl.g22 - pl.g12 * pl.g12;
  if (pl.det < 1e-12 * std::max(1.0, pl.g11 * pl.g22)) throw Failure(kExitInput, "plane axes are parallel");

  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  if (range.size() == 4) {
    x0 = range[0];
    x1 = range[1];
    y0 = range[2];
    y1 = range[3];
    if (!(x1 > x0 && y1 > y0)) throw Failure(kExitInput, "empty --range");
  } else {
    auto_range(a.get(), b.get(), pl.w1, x0, x1);
    auto_range(a.get(), b.get(), pl.w2, y0, y1);
  }

  const Vec basis = project ? complement_basis(pl.w1, pl.w2) : Vec{};
  const int m = project ? n - 2 : 0;
  std::vector<Cell> cells(static_cast<std::size_t>(grid) * grid, Cell::Outside);
  std::atomic<int> next_row{0};
  auto worker = [&] {
    for (int row = next_row++; row < grid; row = next_row++) {
      const double v = y1 - (row + 0.5) * (y1 - y0) / grid;
      for (int col = 0; col < grid; ++col) {
        const double u = x0 + (col + 0.5) * (x1 - x0) / grid;
        const Vec x = pl.point(u, v);
        const int in_a = project ? projection_member(a.get(), x, basis, m) : slice_member(a.get(), x);
        int in_b = 0;
        if (in_a != 1) in_b = project ? projection_member(b.get(), x, basis, m) : slice_member(b.get(), x);
        Cell c = Cell::Outside;
        if (in_a == 1) {
          c = Cell::InA;
        } else if (in_a < 0 || in_b < 0) {
          c = Cell::Unknown;
        } else if (in_b == 1) {
          c = Cell::InB;
        }
        cells[static_cast<std::size_t>(row) * grid + col] = c;
      }
    }
  };
  const unsigned threads = project ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream f(out);
  if (!f) throw Failure(kExitInput, "cannot write " + out);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"480\" "
                "viewBox=\"0 0 %d %d\" shape-rendering=\"crispEdges\">\n",
                grid, grid);
  f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << buf;
  std::snprintf(buf, sizeof buf, "<!-- %s, x in [%.6g, %.6g], y in [%.6g, %.6g] -->\n", mode.c_str(), x0, x1, y0, y1);
  f << buf;
  std::snprintf(buf, sizeof buf, "<rect width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", grid, grid);
  f << buf;
  int counts[4] = {0, 0, 0, 0};
  for (int row = 0; row < grid; ++row) {
    int col = 0;
    while (col < grid) {
      const Cell c = cells[static_cast<std::size_t>(row) * grid + col];
      int end = col + 1;
      while (end < grid && cells[static_cast<std::size_t>(row) * grid + end] == c) ++end;
      counts[static_cast<int>(c)] += end - col;
      if (c != Cell::Outside) {
        std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"1\" fill=\"%s\"/>\n", col, row,
                      end - col, colour(c));
        f << buf;
      }
      col = end;
    }
  }
  f << "</svg>\n";
  std::printf("wrote %s: %dx%d %s, inner %d, outer only %d, unknown %d pixels\n", out.c_str(), grid, grid,
              mode.c_str(), counts[1], counts[2], counts[3]);
  return 0;
}

}  // namespace cli
