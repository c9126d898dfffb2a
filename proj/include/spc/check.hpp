#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spc/momrelax.hpp"
#include "spc/pencil.hpp"
#include "spc/sdp.hpp"

namespace spc {

inline constexpr const char* kReportSchema = "spc.check/1";

struct CheckOptions {
  bool sdfp = true;
  bool sos = true;
  bool moment = true;
  int order = 2;     ///< moment order; the sos order is max(0, order - 2)
  double r = 1.0;
  double R = 2.0;
  double tol = 1e-7;
  bool reduce = true;
  bool extended = true;  ///< SDFP on 1 (+) A
  int samples = 2000;
  unsigned long long seed = 1;
  SolverOptions solver;
};

struct MethodRecord {
  std::string method;  ///< "sdfp", "sos" or "moment"
  int order = 0;
  double value = 0.0;  ///< SDFP margin, lambda_sos or mu_mom
  std::string outcome; ///< certified / refuted / inconclusive (feasible / infeasible for sdfp)
  bool certifies = false;
  SdpStatus status = SdpStatus::Inaccurate;
  SdpResiduals residuals;
  int iterations = 0;
  double seconds = 0.0;
  std::string note;
};

struct CheckReport {
  VerdictKind verdict = VerdictKind::Inconclusive;
  std::vector<MethodRecord> methods;
  std::optional<Eigen::VectorXd> witness;  ///< original coordinates
  double witness_eig = 0.0;
  std::string preprocessing;               ///< short human-readable summary
  int lineality_removed = 0;
  int inner_k = 0;
  int outer_k = 0;
  std::vector<std::string> notes;
  CheckOptions options;
  int n = 0;
  int k = 0;
  int l = 0;

  /// 0 certified, 1 refuted, 2 inconclusive.
  int exit_code() const;
  std::string to_json() const;
};

/// Runs the selected criteria. Certified when any criterion certifies,
/// Refuted only with a confirmed point x in S_A where B(x) is not PSD.
/// Throws InvariantViolation if both happen, InvalidInput on bad input.
CheckReport check_containment(const LinearPencil& a, const LinearPencil& b, const CheckOptions& opts);

struct RandomInstanceOptions {
  int n = 2;
  int k = 4;
  int l = 4;
  double density = 0.35;
  double b_diag = 2.0;  ///< diagonal of B_0; A_0 has ones
  int max_tries = 1000;
};

struct RandomInstance {
  LinearPencil a;
  LinearPencil b;
  std::uint64_t seed_a = 0;  ///< seeds actually used after discards
  std::uint64_t seed_b = 0;
  int discarded = 0;
};

/// Random pair: A is redrawn until S_A is bounded with nonempty interior, B
/// until it has an interior point. Deterministic in seed.
RandomInstance random_instance(const RandomInstanceOptions& opts, std::uint64_t seed);

}  // namespace spc
