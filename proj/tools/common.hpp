#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spc/spc.h"

namespace cli {

// Exit codes beyond the verdicts 0/1/2.
inline constexpr int kExitInput = 64;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInvariant = 4;
inline constexpr int kExitUnsupported = 5;
inline constexpr int kExitInternal = 70;

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline int exit_code_for(spc_status s) {
  switch (s) {
    case SPC_OK: return 0;
    case SPC_ERR_INVALID_INPUT:
    case SPC_ERR_DEGENERATE:
    case SPC_ERR_ORDER:
    case SPC_ERR_NULL_ARG: return kExitInput;
    case SPC_ERR_NUMERICAL: return kExitNumerical;
    case SPC_ERR_INVARIANT: return kExitInvariant;
    case SPC_ERR_UNSUPPORTED: return kExitUnsupported;
    case SPC_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

inline void ok(spc_status s, const std::string& what) {
  if (s != SPC_OK) throw Failure(exit_code_for(s), what + ": " + spc_last_error());
}

struct PencilDeleter {
  void operator()(spc_pencil* p) const { spc_pencil_free(p); }
};
using Pencil = std::unique_ptr<spc_pencil, PencilDeleter>;

struct ReportDeleter {
  void operator()(spc_report* r) const { spc_report_free(r); }
};
using Report = std::unique_ptr<spc_report, ReportDeleter>;

inline Pencil read_pencil(const std::string& path) {
  spc_pencil* p = nullptr;
  ok(spc_pencil_read(path.c_str(), &p), "reading " + path);
  return Pencil(p);
}

inline void write_pencil(const spc_pencil* p, const std::string& path) {
  ok(spc_pencil_write(p, path.c_str()), "writing " + path);
}

// Takes ownership of a string returned by the library.
inline std::string take(char* s) {
  std::string out(s);
  spc_string_free(s);
  return out;
}

inline const char* verdict_name(int v) {
  switch (v) {
    case SPC_CERTIFIED: return "certified";
    case SPC_REFUTED: return "refuted";
    default: return "inconclusive";
  }
}

inline const char* solver_name(int s) {
  switch (s) {
    case SPC_SOLVER_OPTIMAL: return "optimal";
    case SPC_SOLVER_PRIMAL_INFEASIBLE: return "primal_infeasible";
    case SPC_SOLVER_DUAL_INFEASIBLE: return "dual_infeasible";
    case SPC_SOLVER_INACCURATE: return "inaccurate";
    case SPC_SOLVER_ITER_LIMIT: return "iter_limit";
  }
  return "unknown";
}

std::vector<double> parse_list(const std::string& s);

int run_render(const std::string& a_path, const std::string& b_path, const std::string& out, int plane_i,
               int plane_j, const std::string& mode, int grid, const std::string& axis1,
               const std::string& axis2, const std::string& at, const std::vector<double>& range);

int run_reproduce(int table, const std::string& scale, const std::string& out, int jobs);

}  // namespace cli
