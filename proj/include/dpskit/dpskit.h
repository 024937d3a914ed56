#ifndef DPSKIT_H
#define DPSKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DPS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DPS_API __attribute__((visibility("default")))
#else
#define DPS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  DPS_OK = 0,
  DPS_ERR_INPUT = 2,   /* invalid argument, parse error, state not PPT */
  DPS_ERR_BUDGET = 3,  /* problem exceeds the size budget */
  DPS_ERR_SOLVER = 4,  /* solver breakdown */
  DPS_ERR_INTERNAL = 5
} dps_status;

typedef enum { DPS_FEASIBLE = 0, DPS_INFEASIBLE = 1, DPS_UNDECIDED = 2 } dps_verdict;

typedef enum { DPS_ENTANGLED = 0, DPS_SEPARABLE = 1, DPS_CERT_UNDECIDED = 2 } dps_cert_verdict;

typedef enum { DPS_GN_TRIDIAGONAL = 0, DPS_GN_ROOTS = 1, DPS_GN_PENCIL = 2 } dps_gn_route;

typedef struct dps_operator dps_operator;
typedef struct dps_problem dps_problem;

typedef struct {
  double tol;
  int max_iter;
  int64_t budget_dim;
  int all_cuts;
  const char* log_path; /* NULL or empty: no iteration log */
} dps_options;

/* Message of the last failed call on this thread; never NULL. */
DPS_API const char* dps_last_error(void);
DPS_API const char* dps_version(void);
DPS_API void dps_options_default(dps_options* opts);
DPS_API void dps_string_free(char* s);
/* Name of a solver status code as reported in result structs. */
DPS_API const char* dps_solver_status_name(int status);

/* Operators. Entry arrays are row-major, side x side. */
DPS_API dps_status dps_operator_create(int nfactors, const int* dims, const double* re, const double* im,
                                       dps_operator** out);
DPS_API dps_status dps_operator_from_json(const char* json, dps_operator** out);
DPS_API dps_status dps_operator_to_json(const dps_operator* op, char** out);
DPS_API void dps_operator_free(dps_operator* op);
DPS_API int dps_operator_side(const dps_operator* op);
DPS_API int dps_operator_nfactors(const dps_operator* op);
DPS_API dps_status dps_operator_dims(const dps_operator* op, int* dims, int capacity);
DPS_API dps_status dps_operator_entries(const dps_operator* op, double* re, double* im);
DPS_API dps_status dps_operator_pure(int nfactors, const int* dims, const double* re, const double* im,
                                     dps_operator** out);
DPS_API dps_status dps_state_random(int nfactors, const int* dims, int rank, uint64_t seed, dps_operator** out);
DPS_API dps_status dps_state_example(int K, dps_operator** out);
DPS_API dps_status dps_negativity(const dps_operator* rho, double* out);
DPS_API dps_status dps_disentangle(const dps_operator* rho, int N, int ppt, dps_operator** out);

/* Extension membership. */
typedef struct {
  int verdict; /* dps_verdict */
  int solver_status;
  int iterations;
  double primal_res, dual_res, gap;
  double witness_value; /* tr(W rho) when a witness is returned */
} dps_membership_info;

/* witness may be NULL; otherwise receives the witness or NULL. */
DPS_API dps_status dps_membership(const dps_operator* rho, int N, int ppt, const dps_options* opts,
                                  dps_membership_info* info, dps_operator** witness);
/* Minimum of tr(W sigma) over unit-trace members of the tested cone. */
DPS_API dps_status dps_verify_witness(const dps_operator* w, int N, int ppt, const dps_options* opts,
                                      double* min_value);

/* Analytic bounds. */
typedef struct {
  int d_A, d_B, N;
  double g_N;
  double p_c_sym, p_c_ppt;
  double robustness_sym, robustness_ppt;
  double dist_trace_sym, dist_op_sym, dist_trace_ppt, dist_op_ppt;
  double g_N_asymptotic;
  double bessel_zero;
  int ppt_distance_valid;
} dps_bound_report;

typedef struct {
  int N_sym, N_ppt;
  double sym_ops, ppt_ops, sym_simplified, ppt_simplified; /* natural logs */
} dps_complexity;

DPS_API dps_status dps_g_N(int d, int N, int route, double* out);
DPS_API dps_status dps_bessel_zero(double nu, double* out);
DPS_API dps_status dps_bound_report_get(int d_A, int d_B, int N, dps_bound_report* out);
DPS_API dps_status dps_required_N(double delta, int d_B, int ppt, int* out);
DPS_API dps_status dps_complexity_get(int d_A, int d_B, double delta, dps_complexity* out);
/* tilde may be NULL. */
DPS_API dps_status dps_ppt_alone(const dps_operator* rho, double* p_A, double* p_B, double* rg_bound,
                                 double* trace_bound, dps_operator** tilde);

/* Applications. */
typedef struct {
  double upper, lower;
  int N, ppt;
  int solver_status;
} dps_bound_pair;

DPS_API dps_status dps_problem_from_json(const char* json, dps_problem** out);
DPS_API dps_status dps_problem_to_json(const dps_problem* p, char** out);
DPS_API dps_status dps_problem_bb84(double eps, dps_problem** out);
DPS_API dps_status dps_problem_qutrit_grid(double eps, dps_problem** out);
DPS_API void dps_problem_free(dps_problem* p);
DPS_API dps_status dps_problem_operator(const dps_problem* p, dps_operator** out);

DPS_API dps_status dps_fidelity_bounds(const dps_problem* p, int N, int ppt, const dps_options* opts,
                                       dps_bound_pair* out);
DPS_API dps_status dps_choi_identity(int d, dps_operator** out);
DPS_API dps_status dps_choi_depolarizing(int d, double p, dps_operator** out);
DPS_API dps_status dps_purity_bounds(const dps_operator* choi, int N, int ppt, const dps_options* opts,
                                     dps_bound_pair* out);
/* Tripartite pure state as a vector of length dims[0]*dims[1]*dims[2]. */
DPS_API dps_status dps_geometric_bounds(const int* dims, const double* re, const double* im, int N, int ppt,
                                        const dps_options* opts, dps_bound_pair* out);
/* "ghz", "w" or "product": three qubits, 8 amplitudes each. */
DPS_API dps_status dps_named_state(const char* name, double* re, double* im);

/* Certification; json receives {"verdict","N","ranks","witness",...}. */
DPS_API dps_status dps_certify(const dps_operator* rho, int max_N, double delta, const dps_options* opts,
                               int* verdict, char** json);

#ifdef __cplusplus
}
#endif

#endif
