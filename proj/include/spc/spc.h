/* C interface to the spectrahedral containment library.
 *
 * All functions return an spc_status; on failure spc_last_error() holds a
 * message for the calling thread. Objects are opaque and owned by the caller
 * once returned: free pencils with spc_pencil_free, reports with
 * spc_report_free and strings with spc_string_free.
 *
 * Coefficient arrays are (n + 1) blocks of k * k doubles, row-major, the
 * constant term first. */
#ifndef SPC_SPC_H
#define SPC_SPC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SPC_API __declspec(dllexport)
#else
#define SPC_API __attribute__((visibility("default")))
#endif

typedef enum spc_status {
  SPC_OK = 0,
  SPC_ERR_INVALID_INPUT = 1,
  SPC_ERR_NUMERICAL = 2,
  SPC_ERR_DEGENERATE = 3,
  SPC_ERR_ORDER = 4,
  SPC_ERR_INVARIANT = 5,
  SPC_ERR_UNSUPPORTED = 6,
  SPC_ERR_INTERNAL = 7,
  SPC_ERR_NULL_ARG = 8
} spc_status;

/* Values match the check exit codes. */
typedef enum spc_verdict {
  SPC_CERTIFIED = 0,
  SPC_REFUTED = 1,
  SPC_INCONCLUSIVE = 2
} spc_verdict;

typedef enum spc_solver_status {
  SPC_SOLVER_OPTIMAL = 0,
  SPC_SOLVER_PRIMAL_INFEASIBLE = 1,
  SPC_SOLVER_DUAL_INFEASIBLE = 2,
  SPC_SOLVER_INACCURATE = 3,
  SPC_SOLVER_ITER_LIMIT = 4
} spc_solver_status;

typedef enum spc_probe_outcome {
  SPC_PROBE_NONEMPTY = 0,
  SPC_PROBE_EMPTY = 1,
  SPC_PROBE_UNKNOWN = 2
} spc_probe_outcome;

typedef enum spc_radius_status {
  SPC_RADIUS_FINITE = 0,
  SPC_RADIUS_UNBOUNDED = 1,
  SPC_RADIUS_EMPTY = 2
} spc_radius_status;

typedef enum spc_sdpa_kind {
  SPC_SDPA_MOMENT = 0, /* containment moment relaxation of order t */
  SPC_SDPA_SOS = 1,    /* sos-matrix relaxation of order t */
  SPC_SDPA_SDFP = 2,   /* complete positivity feasibility problem */
  SPC_SDPA_RADIUS = 3  /* circumradius relaxation of a (b ignored) about 0 */
} spc_sdpa_kind;

typedef struct spc_pencil spc_pencil;
typedef struct spc_report spc_report;

typedef struct spc_options {
  int sdfp;     /* methods used by spc_check, nonzero = on */
  int sos;
  int moment;
  int order;    /* moment order t; spc_check uses sos order max(0, t - 2) */
  double r;
  double R;
  double tol;
  int reduce;
  int extended; /* SDFP on the extended pencil */
  int samples;
  uint64_t seed;
  double tol_gap;
  double tol_feas;
  int max_iter;
} spc_options;

/* One relaxation or feasibility solve. `verdict` is an spc_verdict; for
 * spc_sdfp CERTIFIED means feasible and REFUTED infeasible. */
typedef struct spc_value {
  double value;
  int verdict;
  int solver_status;
  double primal_residual;
  double dual_residual;
  double gap;
  int iterations;
  double seconds;
} spc_value;

typedef struct spc_radius {
  int status; /* spc_radius_status */
  double value;
  int solver_status;
  double primal_residual;
  double dual_residual;
  double gap;
  double seconds;
} spc_radius;

SPC_API const char* spc_version(void);
SPC_API const char* spc_last_error(void);
SPC_API const char* spc_status_name(spc_status s);
SPC_API void spc_string_free(char* s);

/* Pencils */
SPC_API spc_status spc_pencil_create(int n, int k, const double* coeffs, spc_pencil** out);
SPC_API spc_status spc_pencil_from_json(const char* text, spc_pencil** out);
SPC_API spc_status spc_pencil_read(const char* path, spc_pencil** out);
SPC_API spc_status spc_pencil_write(const spc_pencil* p, const char* path);
SPC_API spc_status spc_pencil_to_json(const spc_pencil* p, char** out);
SPC_API void spc_pencil_free(spc_pencil* p);
SPC_API int spc_pencil_n(const spc_pencil* p);
SPC_API int spc_pencil_k(const spc_pencil* p);
/* Copies (n + 1) * k * k doubles into out (len is its capacity). */
SPC_API spc_status spc_pencil_coeffs(const spc_pencil* p, double* out, size_t len);
SPC_API spc_status spc_pencil_min_eig(const spc_pencil* p, const double* x, size_t len, double* out);
SPC_API spc_status spc_pencil_scaled(const spc_pencil* p, double nu, spc_pencil** out);
/* x = offset + basis * u; basis is n x m, row-major. */
SPC_API spc_status spc_pencil_substitute(const spc_pencil* p, const double* offset, const double* basis,
                                         int m, spc_pencil** out);
/* [min, max] of dir^T x over the spectrahedron; infinite ends for unbounded. */
SPC_API spc_status spc_pencil_extent(const spc_pencil* p, const double* dir, size_t len, double* lo,
                                     double* hi);

SPC_API spc_status spc_pencil_ball(int n, double radius, spc_pencil** out);
SPC_API spc_status spc_pencil_elliptope(int k, spc_pencil** out);
/* Diagonal pencil diag(b + A x), A is m x n row-major. */
SPC_API spc_status spc_pencil_polytope(int m, int n, const double* a, const double* b, spc_pencil** out);
SPC_API spc_status spc_pencil_random(int n, int k, double density, double diag0, uint64_t seed,
                                     spc_pencil** out);
/* Random containment pair: bounded inner set with interior, outer set with
 * interior and B_0 diagonal b_diag. */
SPC_API spc_status spc_random_instance(int n, int k, int l, double b_diag, uint64_t seed, spc_pencil** a,
                                       spc_pencil** b);
/* Linear maps R^{k x k} -> R^{l x l} are passed as the images of the matrix
 * units E_ij: k * k blocks (i-major) of l * l doubles, row-major. */
SPC_API spc_status spc_choi_images(double* out, size_t len); /* builtin 3 x 3 Choi-type map */
/* Pencils (A, B) with S_A the unit-trace slice of the PSD cone and
 * B = Phi(A): the map is positive iff S_A is contained in S_B. */
SPC_API spc_status spc_map_pencils(int k, int l, const double* images, spc_pencil** a, spc_pencil** b);
/* Minimal eigenvalue of the Choi matrix; nonnegative iff completely positive. */
SPC_API spc_status spc_map_choi_min_eig(int k, int l, const double* images, double* out);

/* Methods */
SPC_API void spc_options_default(spc_options* opts);
SPC_API spc_status spc_probe(const spc_pencil* p, int* outcome, double* x, size_t len, double* margin);
SPC_API spc_status spc_mu_mom(const spc_pencil* a, const spc_pencil* b, int t, const spc_options* opts,
                              spc_value* out);
SPC_API spc_status spc_lambda_sos(const spc_pencil* a, const spc_pencil* b, int t, const spc_options* opts,
                                  spc_value* out);
SPC_API spc_status spc_sdfp(const spc_pencil* a, const spc_pencil* b, const spc_options* opts,
                            spc_value* out);
/* center may be NULL for the origin. */
SPC_API spc_status spc_circumradius(const spc_pencil* p, const double* center, size_t len, int t,
                                    const spc_options* opts, spc_radius* out);
SPC_API spc_status spc_export_sdpa(const spc_pencil* a, const spc_pencil* b, int kind, int t,
                                   const spc_options* opts, char** out);

/* Full containment check */
SPC_API spc_status spc_check(const spc_pencil* a, const spc_pencil* b, const spc_options* opts,
                             spc_report** out);
SPC_API int spc_report_verdict(const spc_report* r);
SPC_API int spc_report_exit_code(const spc_report* r);
SPC_API spc_status spc_report_json(const spc_report* r, char** out);
SPC_API size_t spc_report_method_count(const spc_report* r);
/* name receives the method name ("sdfp", "sos", "moment"); may be NULL. */
SPC_API spc_status spc_report_method(const spc_report* r, size_t i, spc_value* out, const char** name,
                                     int* order);
/* Returns 1 and fills x (len >= n) when a refuting point exists, else 0. */
SPC_API int spc_report_witness(const spc_report* r, double* x, size_t len, double* lambda_min);
SPC_API void spc_report_free(spc_report* r);

#ifdef __cplusplus
}
#endif

#endif
