#ifndef RADINEQ_H
#define RADINEQ_H

/* C interface to the radineq library. Every call returns a status code; on
 * failure radineq_last_error() holds a message for the calling thread.
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function (NULL is accepted). */

#include <stddef.h>

#if defined(RADINEQ_BUILDING)
#define RADINEQ_API __attribute__((visibility("default")))
#else
#define RADINEQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RADINEQ_OK = 0,
  RADINEQ_INVALID_ARGUMENT = 1,
  RADINEQ_DOMAIN = 2,
  RADINEQ_NUMERICAL = 3,
  RADINEQ_INTERNAL = 4
} radineq_status;

typedef enum {
  RADINEQ_CKN_CLASSICAL = 0,
  RADINEQ_CKN_RADIAL = 1,
  RADINEQ_TRACE_RADIAL = 2,
  RADINEQ_TRACE_OPERATOR = 3,
  RADINEQ_DDD = 4
} radineq_theorem;

typedef enum { RADINEQ_GAUSSIAN = 0, RADINEQ_BUMP = 1, RADINEQ_POWER_TAIL = 2 } radineq_family;
typedef enum { RADINEQ_Z_GAUSSIAN = 0, RADINEQ_Z_EXPONENTIAL = 1 } radineq_zprofile;
typedef enum { RADINEQ_SMALL_A = 0, RADINEQ_LARGE_R = 1, RADINEQ_SINGULAR = 2 } radineq_regime;
typedef enum { RADINEQ_CONV_FAST = 0, RADINEQ_CONV_DIRECT = 1 } radineq_conv_method;

typedef struct {
  int n;
  double p, q, r, a, alpha, beta, gamma, sigma;
} radineq_ckn_params;

typedef struct {
  int n;
  double p, q, alpha, beta;
} radineq_trace_params;

typedef struct {
  int n;
  double p, q, alpha, beta, gamma;
} radineq_ddd_params;

typedef struct {
  radineq_family family;
  double scale;
  double tail_exponent; /* power_tail only */
  double transition;    /* bump: 0 for the classic bump, else plateau width fraction */
  double cutoff;        /* power_tail: 0 for no cutoff */
} radineq_family_spec;

typedef struct {
  radineq_zprofile kind;
  double scale;
} radineq_zspec;

typedef struct {
  const char* label; /* valid while the report lives */
  int satisfied;
  double residual;
  int vacuous;
} radineq_condition;

enum {
  RADINEQ_FLAG_ZERO_OVER_ZERO = 1,
  RADINEQ_FLAG_NONFINITE = 2,
  RADINEQ_FLAG_TRUNCATED = 4
};

typedef struct {
  radineq_theorem theorem;
  radineq_family_spec family;
  radineq_zspec zprofile; /* trace records only */
  double lambda;
  double lhs, rhs, ratio;
  unsigned flags; /* RADINEQ_FLAG_* bits */
} radineq_ratio_record;

typedef struct {
  int require_admissible;
  int check_refinement;
  int threads;
} radineq_scan_options;

typedef struct {
  size_t count;
  double sup;
  double sup_refined;
  double refinement_change;
  int stable;
} radineq_scan_summary;

typedef struct radineq_grid radineq_grid;
typedef struct radineq_report radineq_report;
typedef struct radineq_profile radineq_profile;
typedef struct radineq_field radineq_field;
typedef struct radineq_result radineq_result;
typedef struct radineq_scan radineq_scan;

RADINEQ_API const char* radineq_last_error(void);
RADINEQ_API const char* radineq_version(void);

/* names: "ckn-classical", "ckn-radial", "trace" (radial), "trace-operator", "ddd" */
RADINEQ_API const char* radineq_theorem_name(radineq_theorem t);
RADINEQ_API radineq_status radineq_parse_theorem(const char* name, radineq_theorem* out);
RADINEQ_API const char* radineq_family_name(radineq_family f);
RADINEQ_API radineq_status radineq_parse_family(const char* name, radineq_family* out);
RADINEQ_API const char* radineq_zprofile_name(radineq_zprofile z);
RADINEQ_API radineq_status radineq_parse_zprofile(const char* name, radineq_zprofile* out);
RADINEQ_API radineq_family_spec radineq_default_family(radineq_family f);

/* ---- exponents ---- */
RADINEQ_API radineq_status radineq_derive_sigma(double a, double gamma, double beta, double* sigma);
RADINEQ_API radineq_status radineq_ckn_scaling_residual(const radineq_ckn_params* p, double* out);
RADINEQ_API radineq_status radineq_trace_scaling_residual(const radineq_trace_params* p, double* out);
RADINEQ_API radineq_status radineq_ddd_scaling_residual(const radineq_ddd_params* p, double* out);

/* theorem must be ckn-classical or ckn-radial */
RADINEQ_API radineq_status radineq_check_ckn(radineq_theorem theorem, const radineq_ckn_params* p,
                                             double tol, radineq_report** out);
/* theorem must be trace-radial or trace-operator */
RADINEQ_API radineq_status radineq_check_trace(radineq_theorem theorem, const radineq_trace_params* p,
                                               double tol, radineq_report** out);
RADINEQ_API radineq_status radineq_check_ddd(const radineq_ddd_params* p, double tol, radineq_report** out);
RADINEQ_API int radineq_report_verdict(const radineq_report* r);
RADINEQ_API size_t radineq_report_size(const radineq_report* r);
RADINEQ_API radineq_status radineq_report_condition(const radineq_report* r, size_t i, radineq_condition* out);
RADINEQ_API void radineq_report_free(radineq_report* r);

/* ---- grids ---- */
RADINEQ_API radineq_status radineq_grid_create(double rmin, double rmax, size_t n, radineq_grid** out);
RADINEQ_API radineq_status radineq_grid_refined(const radineq_grid* g, radineq_grid** out);
RADINEQ_API size_t radineq_grid_size(const radineq_grid* g);
RADINEQ_API double radineq_grid_node(const radineq_grid* g, size_t i);
RADINEQ_API void radineq_grid_free(radineq_grid* g);

/* ---- test functions ---- */
RADINEQ_API radineq_status radineq_profile_create(const radineq_grid* g, const radineq_family_spec* spec,
                                                  radineq_profile** out);
RADINEQ_API radineq_status radineq_profile_dilate(const radineq_profile* u, double lambda,
                                                  radineq_profile** out);
RADINEQ_API size_t radineq_profile_size(const radineq_profile* u);
/* copies u and u' into caller buffers of radineq_profile_size entries; either may be NULL */
RADINEQ_API radineq_status radineq_profile_values(const radineq_profile* u, double* values, double* derivative);
RADINEQ_API void radineq_profile_free(radineq_profile* u);

RADINEQ_API radineq_status radineq_field_create(const radineq_grid* rgrid, const radineq_grid* zgrid,
                                                const radineq_family_spec* u, const radineq_zspec* v,
                                                radineq_field** out);
RADINEQ_API radineq_status radineq_field_dilate(const radineq_field* f, double lambda, radineq_field** out);
RADINEQ_API void radineq_field_free(radineq_field* f);

/* ---- kernels ---- */
RADINEQ_API double radineq_unit_sphere_area(int d);
RADINEQ_API radineq_status radineq_kernel_I(double a, double z, int n, double* value, double* est_error);
RADINEQ_API radineq_status radineq_kernel_I_closed_n3(double a, double z, double* value);
RADINEQ_API radineq_status radineq_kernel_fit(int n, radineq_regime regime, double* exponent, double* residual);

/* ---- multiplicative convolution; f, g and out hold radineq_grid_size samples ---- */
RADINEQ_API radineq_status radineq_mult_convolve(const radineq_grid* g, const double* f, const double* k,
                                                 radineq_conv_method method, double* out, int* truncated);
RADINEQ_API radineq_status radineq_young_ratio(const radineq_grid* g, const double* f, const double* k,
                                               double p, double q, double s, double* out);

/* ---- operators ---- */
RADINEQ_API radineq_status radineq_riesz(const radineq_profile* v, double gamma, int n, radineq_result** out);
RADINEQ_API radineq_status radineq_representation_bound(const radineq_profile* u, int n, radineq_result** out,
                                                        double* min_margin);
RADINEQ_API radineq_status radineq_trace_apply(const radineq_field* f, int n, radineq_result** out);
RADINEQ_API radineq_status radineq_trace_direct(const radineq_field* f, int n, const double* rhos, size_t count,
                                                double* out);
RADINEQ_API radineq_status radineq_weighted_norm(const radineq_profile* u, double w, double p, int n,
                                                 double* value, int* truncated);
RADINEQ_API size_t radineq_result_size(const radineq_result* r);
RADINEQ_API double radineq_result_rho(const radineq_result* r, size_t i);
RADINEQ_API double radineq_result_value(const radineq_result* r, size_t i);
RADINEQ_API int radineq_result_truncated(const radineq_result* r);
RADINEQ_API void radineq_result_free(radineq_result* r);

/* ---- verification ---- */
RADINEQ_API radineq_status radineq_ckn_ratio(const radineq_profile* u, const radineq_ckn_params* p,
                                             radineq_ratio_record* out);
RADINEQ_API radineq_status radineq_trace_ratio(const radineq_field* f, const radineq_trace_params* p,
                                               radineq_ratio_record* out);
RADINEQ_API radineq_status radineq_ddd_ratio(const radineq_profile* v, const radineq_ddd_params* p,
                                             radineq_ratio_record* out);
RADINEQ_API radineq_status radineq_hardy_step_ratio(const radineq_profile* u, double alpha, double p, int n,
                                                    double* out);

RADINEQ_API radineq_status radineq_predicted_slope_ckn(const radineq_ckn_params* p, double* out);
RADINEQ_API radineq_status radineq_predicted_slope_trace(const radineq_trace_params* p, double* out);
RADINEQ_API radineq_status radineq_predicted_slope_ddd(const radineq_ddd_params* p, double* out);
RADINEQ_API radineq_status radineq_dilation_slope_ckn(const radineq_profile* u, const radineq_ckn_params* p,
                                                      const double* lambdas, size_t count, double* slope,
                                                      int* flagged);
RADINEQ_API radineq_status radineq_dilation_slope_trace(const radineq_field* f, const radineq_trace_params* p,
                                                        const double* lambdas, size_t count, double* slope,
                                                        int* flagged);
RADINEQ_API radineq_status radineq_dilation_slope_ddd(const radineq_profile* v, const radineq_ddd_params* p,
                                                      const double* lambdas, size_t count, double* slope,
                                                      int* flagged);

RADINEQ_API radineq_scan_options radineq_default_scan_options(void);
RADINEQ_API radineq_status radineq_scan_ckn(const radineq_family_spec* specs, size_t count,
                                            const radineq_ckn_params* p, const radineq_grid* g,
                                            const radineq_scan_options* opts, radineq_scan** out);
RADINEQ_API radineq_status radineq_scan_trace(const radineq_family_spec* specs, size_t count,
                                              const radineq_zspec* z, const radineq_trace_params* p,
                                              const radineq_grid* rgrid, const radineq_grid* zgrid,
                                              const radineq_scan_options* opts, radineq_scan** out);
RADINEQ_API radineq_status radineq_scan_ddd(const radineq_family_spec* specs, size_t count,
                                            const radineq_ddd_params* p, const radineq_grid* g,
                                            const radineq_scan_options* opts, radineq_scan** out);
RADINEQ_API radineq_scan_summary radineq_scan_get_summary(const radineq_scan* s);
RADINEQ_API radineq_status radineq_scan_record(const radineq_scan* s, size_t i, radineq_ratio_record* out);
RADINEQ_API void radineq_scan_free(radineq_scan* s);

#ifdef __cplusplus
}
#endif

#endif
