#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "curvatura/curvatura.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const double kPi = 3.14159265358979323846;

static void test_errors(void) {
  curv_manifold* m = NULL;
  EXPECT(curv_manifold_constant(0.5, 3, &m) == CURV_ERR_ARGUMENT);
  EXPECT(m == NULL);
  EXPECT(strlen(curv_last_error()) > 0);
  EXPECT(curv_manifold_warped("sphere", 3, &m) != CURV_OK);
  EXPECT(curv_manifold_euclidean(3, NULL) == CURV_ERR_ARGUMENT);
  EXPECT(strcmp(curv_status_name(CURV_ERR_GEOMETRY), "geometry") == 0 ||
         strlen(curv_status_name(CURV_ERR_GEOMETRY)) > 0);

  curv_config* cfg = NULL;
  EXPECT(curv_config_load_string("{\"schema_version\": 2}", &cfg) == CURV_ERR_CONFIG);
  EXPECT(strstr(curv_last_error(), "schema_version") != NULL);
  EXPECT(curv_config_load_string("{", &cfg) == CURV_ERR_CONFIG);

  curv_manifold_destroy(NULL);
  curv_field_destroy(NULL);
  curv_config_destroy(NULL);
}

static void test_sphere(void) {
  curv_manifold* m = NULL;
  curv_field* u = NULL;
  EXPECT(curv_manifold_constant(-1.0, 3, &m) == CURV_OK);
  EXPECT(curv_manifold_dim(m) == 3);
  EXPECT(curv_field_radial(3, NULL, &u) == CURV_OK);

  curv_quadrature q = curv_quadrature_default();
  EXPECT(q.angular_order >= 2 && q.level_order >= 2);
  curv_integral res;
  EXPECT(curv_total_mean_curvature(m, u, 1.0, 2, &q, &res) == CURV_OK);
  const double c = cosh(1.0);
  EXPECT(fabs(res.value - 4 * kPi * c * c) < 1e-7);
  EXPECT(res.node_count > 0);

  double oracle = 0.0;
  EXPECT(curv_sphere_total_mean_curvature(m, 2, 1.0, &oracle) == CURV_OK);
  EXPECT(fabs(oracle - 4 * kPi * c * c) < 1e-12);

  curv_comparison cmp;
  EXPECT(curv_comparison_rhs(m, u, 0.5, 1.0, 1, &q, &cmp) == CURV_OK);
  EXPECT(fabs(cmp.residual) <= cmp.error_budget + 1e-9);
  curv_comparison cc;
  EXPECT(curv_comparison_constant(m, u, 0.5, 1.0, 1, &q, &cc) == CURV_OK);
  EXPECT(fabs(cc.lhs - cmp.lhs) < 1e-9);
  curv_comparison ric;
  EXPECT(curv_ricci_comparison(m, u, 0.5, 1.0, &q, &ric) == CURV_OK);
  EXPECT(fabs(ric.term_sectional - cmp.term_sectional) < 1e-9 * fabs(cmp.term_sectional) + 1e-12);

  /* level far outside the working radius */
  EXPECT(curv_total_mean_curvature(m, u, 50.0, 1, &q, &res) == CURV_ERR_GEOMETRY);

  curv_field_destroy(u);
  curv_manifold_destroy(m);
}

static void test_closed_forms(void) {
  double v = 0.0;
  EXPECT(curv_ball_bound(1, 1.0, -1.0, 3, &v) == CURV_OK);
  EXPECT(fabs(v - 8 * kPi * sinh(1.0) * cosh(1.0)) < 1e-12);
  EXPECT(curv_ball_bound(1, 1.0, 1.0, 3, &v) == CURV_ERR_ARGUMENT);

  const int orders[] = {0};
  const double values[] = {4 * kPi * sinh(1.0) * sinh(1.0)};
  EXPECT(curv_solanes_prediction(orders, values, 1, -1.0, 3, &v) == CURV_OK);
  EXPECT(fabs(v - 4 * kPi * cosh(1.0) * cosh(1.0)) < 1e-12);
  EXPECT(curv_solanes_prediction(orders, values, 0, -1.0, 3, &v) == CURV_ERR_ARGUMENT);
}

static void test_fields(void) {
  curv_manifold* m = NULL;
  curv_field* u = NULL;
  EXPECT(curv_manifold_euclidean(3, &m) == CURV_OK);
  const double q[9] = {1, 0, 0, 0, 1, 0, 0, 0, 4};
  EXPECT(curv_field_quadratic(3, q, &u) == CURV_OK);
  curv_quadrature quad = curv_quadrature_default();
  quad.angular_order = 64;
  curv_integral vol;
  EXPECT(curv_total_mean_curvature(m, u, 0.5, -1, &quad, &vol) == CURV_OK);
  EXPECT(fabs(vol.value - 4.0 / 3 * kPi * 0.5) < 1e-7);
  curv_field_destroy(u);

  const double bad[9] = {1, 0, 0, 0, -1, 0, 0, 0, 1};
  EXPECT(curv_field_quadratic(3, bad, &u) == CURV_ERR_ARGUMENT);
  const double center[3] = {0.3, 0, 0};
  EXPECT(curv_field_offcenter(3, center, &u) == CURV_OK);
  curv_field_destroy(u);
  curv_manifold_destroy(m);
}

static void test_suite(void) {
  curv_suite_report* rep = NULL;
  EXPECT(curv_suite_run("asymptotic", 7, 1, &rep) == CURV_OK);
  EXPECT(curv_suite_report_passed(rep));
  EXPECT(curv_suite_report_case_count(rep) > 0);
  curv_case c;
  EXPECT(curv_suite_report_case(rep, 0, &c) == CURV_OK);
  EXPECT(c.check != NULL && strlen(c.check) > 0);
  EXPECT(curv_suite_report_case(rep, 1u << 30, &c) == CURV_ERR_ARGUMENT);
  EXPECT(strncmp(curv_suite_report_csv(rep), "suite,", 6) == 0);
  curv_suite_report_destroy(rep);
  EXPECT(curv_suite_run("nonsense", 7, 1, &rep) == CURV_ERR_ARGUMENT);
}

int main(void) {
  EXPECT(curv_version() != NULL);
  test_errors();
  test_sphere();
  test_closed_forms();
  test_fields();
  test_suite();
  if (failures) {
    fprintf(stderr, "%d checks failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
