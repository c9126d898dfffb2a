#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spc/lmi.hpp"
#include "spc/pencil.hpp"

namespace spc::testing {

// B(x) = I_2 + x1 (E11 - E22) + x2 (E12 + E21)
inline LinearPencil unit_disk() {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 1, 0, 0, -1;
  a2 << 0, 1, 1, 0;
  return LinearPencil({SymMatrix::Identity(2), SymMatrix(a1), SymMatrix(a2)});
}

inline SymMatrix sym_entry(int k, std::initializer_list<std::tuple<int, int, double>> es,
                           double diag = 0.0) {
  Eigen::MatrixXd m = diag * Eigen::MatrixXd::Identity(k, k);
  for (auto [i, j, v] : es) {
    m(i, j) = v;
    m(j, i) = v;
  }
  return SymMatrix(m);
}

// Printed pencils of the first random experiment (two variables, 4 x 4).
inline LinearPencil random_experiment_a() {
  return LinearPencil({SymMatrix::Identity(4),
                       sym_entry(4, {{0, 1, 0.2528}, {1, 3, -0.1314}}),
                       sym_entry(4, {{0, 1, 0.3441}, {2, 3, 0.7969}})});
}

inline LinearPencil random_experiment_b() {
  return LinearPencil({sym_entry(4, {{0, 1, 0.8454}}, 2.0),
                       sym_entry(4, {{1, 2, -0.2489}, {2, 3, 0.3562}}),
                       sym_entry(4, {{1, 2, -0.4063}})});
}

inline Eigen::VectorXd uniform_point(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

// Largest |x_i| over S_A from 2n LMI solves; +inf when unbounded or unsolved.
inline double box_half_width(const LinearPencil& a) {
  double w = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    for (double sgn : {1.0, -1.0}) {
      const LmiResult r = solve_lmi({a}, sgn * Eigen::VectorXd::Unit(a.n(), i));
      if (r.status != SdpStatus::Optimal) return std::numeric_limits<double>::infinity();
      w = std::max(w, std::abs(r.value));
    }
  }
  return w;
}

// Brute-force min of lambda_min(B(x)) over grid members of S_A in a box.
inline double grid_min_eig(const LinearPencil& a, const LinearPencil& b, double half_width,
                           int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = uniform_point(rng, a.n(), -half_width, half_width);
    if (!a.contains_point(x, 0.0)) continue;
    best = std::min(best, min_eigenvalue(b.evaluate(x)));
  }
  return best;
}

}  // namespace spc::testing
