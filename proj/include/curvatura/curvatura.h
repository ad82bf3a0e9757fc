#ifndef CURVATURA_CURVATURA_H
#define CURVATURA_CURVATURA_H

/* Total r-th mean curvatures of level sets in model spaces.
 *
 * Every function returns a curv_status; on failure curv_last_error() holds a
 * message for the calling thread. Objects are opaque and owned by the caller
 * once created; destroy functions accept NULL. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CURVATURA_BUILDING)
#    define CURV_API __declspec(dllexport)
#  else
#    define CURV_API __declspec(dllimport)
#  endif
#else
#  define CURV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum curv_status {
  CURV_OK = 0,
  CURV_ERR_INTERNAL = 1,
  CURV_ERR_CONFIG = 2,
  CURV_ERR_GEOMETRY = 3,   /* level set leaves the chart, degenerate gradient, singular chart */
  CURV_ERR_ARGUMENT = 4,
  CURV_ERR_CAPABILITY = 5,
  CURV_ERR_IO = 6
} curv_status;

typedef struct curv_manifold curv_manifold;
typedef struct curv_field curv_field;
typedef struct curv_config curv_config;
typedef struct curv_run_result curv_run_result;
typedef struct curv_suite_report curv_suite_report;

typedef struct curv_quadrature {
  int angular_order;
  int level_order;
  double margin;
} curv_quadrature;

typedef struct curv_integral {
  double value;
  double error_estimate;
  int64_t node_count;
} curv_integral;

typedef struct curv_comparison {
  double lhs;
  double term_principal;
  double term_sectional;
  double term_mixed;
  double residual;
  double error_budget;
  int64_t node_count;
} curv_comparison;

/* Strings point into the report and stay valid until it is destroyed. */
typedef struct curv_case {
  const char* check;
  const char* family;
  const char* model;
  const char* field;
  int n;
  int r;
  const char* inputs;
  double measured;
  double expected;
  double residual;
  double tolerance;
  int pass;
  const char* note;
} curv_case;

CURV_API const char* curv_version(void);
CURV_API const char* curv_last_error(void);
CURV_API const char* curv_status_name(curv_status status);
CURV_API curv_status curv_set_threads(int threads);

/* Models. profile: "linear", "sinh" or "poly3". */
CURV_API curv_status curv_manifold_euclidean(int dim, curv_manifold** out);
CURV_API curv_status curv_manifold_constant(double a, int dim, curv_manifold** out);
CURV_API curv_status curv_manifold_warped(const char* profile, int dim, curv_manifold** out);
CURV_API int curv_manifold_dim(const curv_manifold* m);
CURV_API void curv_manifold_destroy(curv_manifold* m);

/* Fields. center may be NULL for the radial kinds; q is row-major dim x dim. */
CURV_API curv_status curv_field_radial(int dim, const double* center, curv_field** out);
CURV_API curv_status curv_field_radial_squared(int dim, const double* center, curv_field** out);
CURV_API curv_status curv_field_offcenter(int dim, const double* center, curv_field** out);
CURV_API curv_status curv_field_quadratic(int dim, const double* q, curv_field** out);
CURV_API void curv_field_destroy(curv_field* u);

CURV_API curv_quadrature curv_quadrature_default(void);

/* r in [0, n-1]; r = -1 gives the enclosed volume. */
CURV_API curv_status curv_total_mean_curvature(const curv_manifold* m, const curv_field* u,
                                               double level, int r, const curv_quadrature* q,
                                               curv_integral* out);
CURV_API curv_status curv_comparison_rhs(const curv_manifold* m, const curv_field* u, double c1,
                                         double c2, int r, const curv_quadrature* q,
                                         curv_comparison* out);
CURV_API curv_status curv_comparison_constant(const curv_manifold* m, const curv_field* u,
                                              double c1, double c2, int r,
                                              const curv_quadrature* q, curv_comparison* out);
CURV_API curv_status curv_ricci_comparison(const curv_manifold* m, const curv_field* u, double c1,
                                           double c2, const curv_quadrature* q,
                                           curv_comparison* out);

CURV_API curv_status curv_sphere_total_mean_curvature(const curv_manifold* m, int r, double rho,
                                                      double* out);
CURV_API curv_status curv_ball_bound(int r, double rho, double a, int n, double* out);
/* lower_orders[k] = j, lower_values[k] = M_j for j = n-3, n-5, ... */
CURV_API curv_status curv_solanes_prediction(const int* lower_orders, const double* lower_values,
                                             size_t count, double a, int n, double* out);

/* Run configuration (JSON, schema_version 1). */
CURV_API curv_status curv_config_load_file(const char* path, curv_config** out);
CURV_API curv_status curv_config_load_string(const char* json, curv_config** out);
CURV_API curv_status curv_config_set_seed(curv_config* cfg, uint64_t seed);
CURV_API curv_status curv_config_set_threads(curv_config* cfg, int threads);
CURV_API curv_status curv_config_set_quick(curv_config* cfg, int quick);
CURV_API void curv_config_destroy(curv_config* cfg);

/* command: "compute", "verify" or "sweep". */
CURV_API curv_status curv_run(const curv_config* cfg, const char* command, const char* out_dir,
                              curv_run_result** out);
CURV_API int curv_run_result_passed(const curv_run_result* res);
CURV_API const char* curv_run_result_summary(const curv_run_result* res);
CURV_API size_t curv_run_result_file_count(const curv_run_result* res);
CURV_API const char* curv_run_result_file(const curv_run_result* res, size_t index);
CURV_API void curv_run_result_destroy(curv_run_result* res);

/* suite: "algebra", "pointwise", "comparison", "inequality" or "asymptotic". */
CURV_API curv_status curv_suite_run(const char* suite, uint64_t seed, int quick,
                                    curv_suite_report** out);
CURV_API int curv_suite_report_passed(const curv_suite_report* rep);
CURV_API size_t curv_suite_report_case_count(const curv_suite_report* rep);
CURV_API curv_status curv_suite_report_case(const curv_suite_report* rep, size_t index,
                                            curv_case* out);
CURV_API const char* curv_suite_report_csv(const curv_suite_report* rep);
CURV_API void curv_suite_report_destroy(curv_suite_report* rep);

#ifdef __cplusplus
}
#endif

#endif
