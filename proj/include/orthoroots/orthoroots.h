/* C interface to the orthoroots library.
 *
 * Every call returns an ortho_status. On failure the message is available
 * from ortho_last_error() on the same thread until the next failing call.
 * Structured inputs and outputs are JSON strings; strings returned through
 * an out parameter are owned by the caller and freed with ortho_string_free.
 */
#ifndef ORTHOROOTS_H
#define ORTHOROOTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ORTHO_BUILDING_LIBRARY)
#    define ORTHO_API __declspec(dllexport)
#  else
#    define ORTHO_API __declspec(dllimport)
#  endif
#else
#  define ORTHO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ortho_status {
  ORTHO_OK = 0,
  ORTHO_INVALID_ARGUMENT = 1,
  ORTHO_NOT_CONVERGED = 2,
  ORTHO_IO_ERROR = 3,
  ORTHO_INTERNAL_ERROR = 4
} ortho_status;

typedef struct ortho_table ortho_table;
typedef struct ortho_results ortho_results;

ORTHO_API const char* ortho_version(void);
ORTHO_API const char* ortho_last_error(void);
ORTHO_API void ortho_string_free(char* s);

/* -- recurrence tables ------------------------------------------------- */

/* weight_json: {"kind":"jacobi","beta":0,"gamma":0} or
 * {"kind":"custom","table":[[x,w],...]}. */
ORTHO_API ortho_status ortho_table_create(const char* weight_json, int degree, ortho_table** out);
ORTHO_API void ortho_table_free(ortho_table* t);
ORTHO_API int ortho_table_degree(const ortho_table* t);
/* {weight, N, p0, a, b, orthonormality_defect, defect_degree, support} */
ORTHO_API ortho_status ortho_table_to_json(const ortho_table* t, char** out_json);

/* values receives n + 1 entries p_0(x)..p_n(x); d1 may be NULL. */
ORTHO_API ortho_status ortho_eval_basis(const ortho_table* t, double x, int n, double* values, double* d1);
ORTHO_API ortho_status ortho_eval_combo(const ortho_table* t, const double* coeffs, size_t ncoeffs,
                                        const double* xs, size_t npoints, double* out);
ORTHO_API ortho_status ortho_kernels(const ortho_table* t, double x, int n, double* A, double* B, double* C);

/* -- Kac-Rice and the equilibrium measure ------------------------------- */

ORTHO_API ortho_status ortho_intensity(const ortho_table* t, int n, double x, double* rho);
/* {"n":..,"x":[..],"rho":[..]} at `points` cell midpoints of [lo, hi]. */
ORTHO_API ortho_status ortho_intensity_curve(const ortho_table* t, int n, double lo, double hi, size_t points,
                                             char** out_json);
ORTHO_API ortho_status ortho_expected_count(const ortho_table* t, int n, double lo, double hi, double tol,
                                            double* out);
ORTHO_API ortho_status ortho_qualls_exact(int n, double* out);
ORTHO_API ortho_status ortho_limit_density(double x, double* out);
ORTHO_API ortho_status ortho_equilibrium_mass(double a, double b, double* mass, int* clamped);
ORTHO_API ortho_status ortho_log_potential(double x, double* out);

/* -- roots --------------------------------------------------------------- */

/* grid_json may be NULL or {"min_points","points_per_degree","max_points"}. */
ORTHO_API ortho_status ortho_count_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs, double lo,
                                         double hi, const char* grid_json, size_t* count, int* converged);
/* {"roots":[..],"bracket_width":..}. tol <= 0 selects the default. */
ORTHO_API ortho_status ortho_locate_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs, double lo,
                                          double hi, double tol, char** out_json);
ORTHO_API ortho_status ortho_comrade_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs,
                                           char** out_json);

/* -- ensembles ----------------------------------------------------------- */

/* dist_json: {"dist":"gaussian"|"rademacher"|"uniform"|"pareto","alpha":2.5}.
 * Writes n + 1 coefficients for trial `trial` of master seed `seed`. */
ORTHO_API ortho_status ortho_sample_coeffs(const char* dist_json, int n, uint64_t seed, uint64_t trial,
                                           double* out);
/* {"samples","mean","var","abs_moment_2pe","declared_moment_2pe","eps","skewness","skewness_stderr"} */
ORTHO_API ortho_status ortho_moment_report(const char* dist_json, size_t m, uint64_t seed, char** out_json);

/* -- experiments --------------------------------------------------------- */

/* config_json: {"weight","dist","n","trials","intervals","seed","workers","grid","damping"}.
 * `kind` selects the experiment:
 *   "simulate"      global count plus one record per interval
 *   "local"         local count on the first interval
 *   "edge"          params {"eps":[..],"margin":0.05}
 *   "paircorr"      params {"x0":0,"c":1}
 *   "anticonc"      params {"x0":0,"c":1,"threshold":1e-9}
 *   "trig"          uses n, trials, seed, workers, grid only
 * params_json may be NULL. */
ORTHO_API ortho_status ortho_run_experiment(const char* kind, const char* config_json, const char* params_json,
                                            ortho_results** out);
/* Two configs that differ only in dist and seed; scope "global" or "local".
 * Result holds record_a, record_b; the verdict is in the summary JSON. */
ORTHO_API ortho_status ortho_run_universality(const char* config_a_json, const char* config_b_json,
                                              const char* scope, double z, ortho_results** out);
ORTHO_API void ortho_results_free(ortho_results* r);
ORTHO_API size_t ortho_results_count(const ortho_results* r);
ORTHO_API ortho_status ortho_results_get(const ortho_results* r, size_t i, double* estimate, double* std_error,
                                         size_t* trials);
/* All records plus any experiment-level summary as one JSON document. */
ORTHO_API ortho_status ortho_results_to_json(const ortho_results* r, char** out_json);
/* Sets wall_ms of every record to 0 so that output bytes depend only on
 * the configuration. */
ORTHO_API void ortho_results_clear_timing(ortho_results* r);
/* Appends CSV rows (header first for a new file). */
ORTHO_API ortho_status ortho_results_write_csv(const ortho_results* r, const char* path);
/* CSV text of all records, preceded by the header when with_header != 0. */
ORTHO_API ortho_status ortho_results_to_csv(const ortho_results* r, int with_header, char** out_csv);
/* Resolved canonical config and its fingerprint: {"config":..,"fingerprint":..}. */
ORTHO_API ortho_status ortho_resolve_config(const char* config_json, char** out_json);

/* -- weight conditions and self test ------------------------------------- */

/* params_json: {"theta_window":[lo,hi],"h":[..]} (may be NULL for defaults). */
ORTHO_API ortho_status ortho_check_weight(const char* weight_json, const char* params_json, char** out_json);
/* {"checks":[{"name","value","bound","upper","pass"}],"pass":bool} */
ORTHO_API ortho_status ortho_selftest(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ORTHOROOTS_H */
