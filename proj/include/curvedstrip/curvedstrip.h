/* C interface to the curved-strip spectral library.
 *
 * Every function returns a cs_status. On failure the thread-local message
 * from cs_last_error() describes the cause. Strings returned through char**
 * are owned by the caller and released with cs_free_string. Robin
 * coefficients are passed as text: a number or "dirichlet".
 */
#ifndef CURVEDSTRIP_H
#define CURVEDSTRIP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CS_OK = 0,
  CS_ERR_VALIDATION = 1,
  CS_ERR_SOLVER = 2,
  CS_ERR_AUDIT = 3, /* the run completed but an asserted inequality failed */
  CS_ERR_RANGE = 4,
  CS_ERR_INTERNAL = 5
} cs_status;

const char* cs_version(void);
const char* cs_last_error(void);
void cs_free_string(char* s);

/* ---- transverse ground state ------------------------------------------ */

typedef struct cs_eigen cs_eigen;

/* lambda(kappa, alpha) by the weighted finite-difference solver. */
cs_status cs_lambda(double kappa, const char* alpha, double a, double tol, cs_eigen** out);
/* Same value from the transformed (flat-measure) form. */
cs_status cs_lambda_transformed(double kappa, const char* alpha, double a, double tol, cs_eigen** out);
/* nu(alpha): lowest eigenvalue of the disc of radius 2a. */
cs_status cs_disc_nu(const char* alpha, double a, double tol, cs_eigen** out);

double cs_eigen_lambda(const cs_eigen* e); /* extrapolated value */
double cs_eigen_lambda_fine(const cs_eigen* e);
double cs_eigen_error_estimate(const cs_eigen* e);
double cs_eigen_residual(const cs_eigen* e);
size_t cs_eigen_size(const cs_eigen* e); /* nodes of the finest mesh */
/* Copies min(n, size) nodes / values; returns the number copied. */
size_t cs_eigen_nodes(const cs_eigen* e, double* buf, size_t n);
size_t cs_eigen_values(const cs_eigen* e, double* buf, size_t n);
void cs_eigen_free(cs_eigen* e);

/* Annulus oracle (kappa != 0) and the straight closed form. */
cs_status cs_lambda_bessel(double kappa, const char* alpha, double a, double* out);
cs_status cs_straight_lambda(const char* alpha, double a, double* out);
cs_status cs_dlambda_dkappa(double kappa, const char* alpha, double a, double tol, double* value, double* error);
/* *found = 0 when no kappa in (0, 1/a) gives lambda = 0. */
cs_status cs_zero_eigen_kappa(double alpha, double a, int* found, double* kappa);

/* JSON object with every solver's value and the agreement deltas. */
cs_status cs_lambda_report(double kappa, const char* alpha, double a, double tol, char** json);

/* ---- batch ------------------------------------------------------------- */

/* alphas: comma-separated tokens. CSV as documented for the sweep command. */
cs_status cs_sweep_csv(const char* alphas, double kappa_min, double kappa_max, int n, double a, double tol,
                       int threads, char** csv);
cs_status cs_critical_alpha(double a, double tol, double* alpha);

/* command: "bound2d", "dk", "hardy" or "stability". Validates the config
 * before any solve. On CS_OK or CS_ERR_AUDIT the report (JSON) and summary
 * (text) are set; either pointer may be NULL. */
cs_status cs_run(const char* command, const char* config_json, double tol, uint64_t seed, int threads, char** report,
                 char** summary);

/* ---- geometry ---------------------------------------------------------- */

typedef struct cs_geometry cs_geometry;

/* kappa_json: a profile object, e.g. {"type":"const","value":0.2}. */
cs_status cs_geometry_build(const char* kappa_json, const double* grid, size_t n, double a, double theta0,
                            cs_geometry** out);
cs_status cs_geometry_curve(const cs_geometry* g, double s, double xy[2]);
cs_status cs_geometry_strip_map(const cs_geometry* g, double s, double t, double xy[2]);
/* injectivity: 0 ok, 1 failed, 2 unknown. overlap may be NULL. */
cs_status cs_geometry_check(const cs_geometry* g, int* supnorm_ok, int* injectivity, double overlap[4]);
void cs_geometry_free(cs_geometry* g);

#ifdef __cplusplus
}
#endif

#endif
