#pragma once

#include <Eigen/Dense>

#include "spc/pencil.hpp"
#include "spc/sdp.hpp"

namespace spc {

enum class RadiusStatus { Finite, Unbounded, Empty };

const char* to_string(RadiusStatus s);

struct RadiusResult {
  RadiusStatus status = RadiusStatus::Finite;
  double value = 0.0;  ///< upper bound on max ||x - center||^2 over S_A when Finite
  int order = 0;
  SdpSolution solution;
};

/// Order-t moment bound for max (x - c)^T (x - c) s.t. A(x) PSD. With a
/// centrally symmetric S_A and c its centre this bounds the squared
/// circumradius. Unbounded means the relaxation is unbounded, which does
/// not by itself show that S_A is unbounded. Throws OrderTooSmall for t < 1
/// and NumericalFailure when the solver gives no usable answer.
RadiusResult circumradius_sq(const LinearPencil& p, const Eigen::VectorXd& center, int t,
                             const SolverOptions& opts = {});

/// The SDP solved by circumradius_sq (sense Maximize).
SdpProblem circumradius_problem(const LinearPencil& p, const Eigen::VectorXd& center, int t);

struct BoundednessCertificate {
  bool bounded = false;
  long long n_bound = 0;  ///< N with ||x||^2 <= N on S_A
  double radius_sq = 0.0;
};

/// Bounded(N) with N = ceil(nu^2(t) - 1e-6) about the origin, or Unknown
/// (bounded == false) when the relaxation is unbounded.
BoundednessCertificate boundedness_certificate(const LinearPencil& p, int t,
                                               const SolverOptions& opts = {});

}  // namespace spc
