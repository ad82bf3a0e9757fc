#include "curvatura/curvatura.h"

#include <map>
#include <new>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "curvature_integrals.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "verification.hpp"

using namespace curvatura;

struct curv_manifold {
  manifold::ModelManifold value;
};

struct curv_field {
  levelset::ScalarField value;
};

struct curv_config {
  app::RunConfig value;
  bool quick = false;
};

struct curv_run_result {
  app::RunOutcome value;
};

struct curv_suite_report {
  verify::SuiteReport value;
  std::string csv;
};

namespace {

thread_local std::string t_last_error;

curv_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return CURV_ERR_CONFIG;
    case ErrorKind::Argument: return CURV_ERR_ARGUMENT;
    case ErrorKind::Capability: return CURV_ERR_CAPABILITY;
    case ErrorKind::Io: return CURV_ERR_IO;
    case ErrorKind::Geometry:
    case ErrorKind::DegenerateGradient:
    case ErrorKind::SingularChart: return CURV_ERR_GEOMETRY;
  }
  return CURV_ERR_INTERNAL;
}

template <class Body>
curv_status guard(Body body) {
  try {
    body();
    t_last_error.clear();
    return CURV_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
  } catch (const std::exception& e) {
    t_last_error = e.what();
  } catch (...) {
    t_last_error = "unknown error";
  }
  return CURV_ERR_INTERNAL;
}

template <class T>
void check_out(T** out) {
  require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
  *out = nullptr;
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (!p) fail(ErrorKind::Argument, std::string(what) + " is NULL");
  return *p;
}

quadrature::QuadratureSpec spec_from(const curv_quadrature* q) {
  const curv_quadrature d = q ? *q : curv_quadrature_default();
  auto spec = quadrature::QuadratureSpec::uniform(d.angular_order, d.level_order);
  spec.margin = d.margin;
  return spec;
}

Vector center_from(int dim, const double* center) {
  Vector c(dim);
  if (center)
    for (int i = 0; i < dim; ++i) c[i] = center[i];
  return c;
}

void fill(const integrals::ComparisonBreakdown& b, curv_comparison* out) {
  out->lhs = b.lhs;
  out->term_principal = b.term_principal;
  out->term_sectional = b.term_sectional;
  out->term_mixed = b.term_mixed;
  out->residual = b.residual;
  out->error_budget = b.error_budget;
  out->node_count = b.node_count;
}

void check_dim(int dim) {
  require(dim >= 2 && dim <= 6, ErrorKind::Argument, "dimension must be in [2, 6]");
}

}  // namespace

extern "C" {

const char* curv_version(void) { return "1.0.0"; }

const char* curv_last_error(void) { return t_last_error.c_str(); }

const char* curv_status_name(curv_status status) {
  switch (status) {
    case CURV_OK: return "ok";
    case CURV_ERR_INTERNAL: return "internal error";
    case CURV_ERR_CONFIG: return "config error";
    case CURV_ERR_GEOMETRY: return "geometry error";
    case CURV_ERR_ARGUMENT: return "argument error";
    case CURV_ERR_CAPABILITY: return "capability error";
    case CURV_ERR_IO: return "io error";
  }
  return "unknown status";
}

curv_status curv_set_threads(int threads) {
  return guard([&] {
    require(threads >= 0, ErrorKind::Argument, "thread count must be >= 0");
    set_thread_count(threads);
  });
}

curv_status curv_manifold_euclidean(int dim, curv_manifold** out) {
  return guard([&] {
    check_out(out);
    check_dim(dim);
    *out = new curv_manifold{manifold::ModelManifold::euclidean(dim)};
  });
}

curv_status curv_manifold_constant(double a, int dim, curv_manifold** out) {
  return guard([&] {
    check_out(out);
    *out = new curv_manifold{build_model(ModelSpec::constant(a), dim)};
  });
}

curv_status curv_manifold_warped(const char* profile, int dim, curv_manifold** out) {
  return guard([&] {
    check_out(out);
    require(profile != nullptr, ErrorKind::Argument, "profile is NULL");
    *out = new curv_manifold{build_model(ModelSpec::warped(profile), dim)};
  });
}

int curv_manifold_dim(const curv_manifold* m) { return m ? m->value.dim() : 0; }

void curv_manifold_destroy(curv_manifold* m) { delete m; }

curv_status curv_field_radial(int dim, const double* center, curv_field** out) {
  return guard([&] {
    check_out(out);
    check_dim(dim);
    *out = new curv_field{levelset::ScalarField::radial_distance(dim, center_from(dim, center))};
  });
}

curv_status curv_field_radial_squared(int dim, const double* center, curv_field** out) {
  return guard([&] {
    check_out(out);
    check_dim(dim);
    *out = new curv_field{
        levelset::ScalarField::radial_distance_squared_half(dim, center_from(dim, center))};
  });
}

curv_status curv_field_offcenter(int dim, const double* center, curv_field** out) {
  return guard([&] {
    check_out(out);
    check_dim(dim);
    require(center != nullptr, ErrorKind::Argument, "center is NULL");
    *out = new curv_field{levelset::ScalarField::off_center_distance(center_from(dim, center))};
  });
}

curv_status curv_field_quadratic(int dim, const double* q, curv_field** out) {
  return guard([&] {
    check_out(out);
    check_dim(dim);
    require(q != nullptr, ErrorKind::Argument, "Q is NULL");
    FieldSpec spec;
    spec.kind = "quadratic";
    for (int i = 0; i < dim; ++i) spec.q.emplace_back(q + i * dim, q + (i + 1) * dim);
    *out = new curv_field{build_field(spec, dim)};
  });
}

void curv_field_destroy(curv_field* u) { delete u; }

curv_quadrature curv_quadrature_default(void) { return curv_quadrature{16, 16, 1e-6}; }

curv_status curv_total_mean_curvature(const curv_manifold* m, const curv_field* u, double level,
                                      int r, const curv_quadrature* q, curv_integral* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    const auto rep = integrals::total_mean_curvature(deref(u, "field").value,
                                                     deref(m, "manifold").value, level, r,
                                                     spec_from(q));
    *out = curv_integral{rep.value, rep.error_estimate, rep.node_count};
  });
}

curv_status curv_comparison_rhs(const curv_manifold* m, const curv_field* u, double c1, double c2,
                                int r, const curv_quadrature* q, curv_comparison* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    fill(integrals::comparison_rhs(deref(u, "field").value, deref(m, "manifold").value, c1, c2, r,
                                   spec_from(q)),
         out);
  });
}

curv_status curv_comparison_constant(const curv_manifold* m, const curv_field* u, double c1,
                                     double c2, int r, const curv_quadrature* q,
                                     curv_comparison* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    fill(integrals::comparison_rhs_constant(deref(u, "field").value, deref(m, "manifold").value,
                                            c1, c2, r, spec_from(q)),
         out);
  });
}

curv_status curv_ricci_comparison(const curv_manifold* m, const curv_field* u, double c1,
                                  double c2, const curv_quadrature* q, curv_comparison* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    fill(integrals::ricci_comparison(deref(u, "field").value, deref(m, "manifold").value, c1, c2,
                                     spec_from(q)),
         out);
  });
}

curv_status curv_sphere_total_mean_curvature(const curv_manifold* m, int r, double rho,
                                             double* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    *out = manifold::sphere_total_mean_curvature(deref(m, "manifold").value, r, rho);
  });
}

curv_status curv_ball_bound(int r, double rho, double a, int n, double* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    *out = integrals::ball_bound(r, rho, a, n);
  });
}

curv_status curv_solanes_prediction(const int* lower_orders, const double* lower_values,
                                    size_t count, double a, int n, double* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    require(count == 0 || (lower_orders && lower_values), ErrorKind::Argument,
            "lower-order arrays are NULL");
    std::map<int, double> lower;
    for (size_t i = 0; i < count; ++i) lower[lower_orders[i]] = lower_values[i];
    *out = integrals::solanes_prediction(lower, a, n);
  });
}

curv_status curv_config_load_file(const char* path, curv_config** out) {
  return guard([&] {
    check_out(out);
    require(path != nullptr, ErrorKind::Argument, "path is NULL");
    *out = new curv_config{app::load_config(path)};
  });
}

curv_status curv_config_load_string(const char* json, curv_config** out) {
  return guard([&] {
    check_out(out);
    require(json != nullptr, ErrorKind::Argument, "json is NULL");
    *out = new curv_config{app::parse_config(json)};
  });
}

curv_status curv_config_set_seed(curv_config* cfg, uint64_t seed) {
  return guard([&] {
    require(cfg != nullptr, ErrorKind::Argument, "config is NULL");
    cfg->value.seed = seed;
  });
}

curv_status curv_config_set_threads(curv_config* cfg, int threads) {
  return guard([&] {
    require(cfg != nullptr, ErrorKind::Argument, "config is NULL");
    require(threads >= 0, ErrorKind::Argument, "thread count must be >= 0");
    cfg->value.threads = threads;
  });
}

curv_status curv_config_set_quick(curv_config* cfg, int quick) {
  return guard([&] {
    require(cfg != nullptr, ErrorKind::Argument, "config is NULL");
    cfg->quick = quick != 0;
  });
}

void curv_config_destroy(curv_config* cfg) { delete cfg; }

curv_status curv_run(const curv_config* cfg, const char* command, const char* out_dir,
                     curv_run_result** out) {
  return guard([&] {
    check_out(out);
    require(command != nullptr && out_dir != nullptr, ErrorKind::Argument,
            "command and output directory are required");
    const auto cmd = app::parse_command(command);
    if (!cmd) fail(ErrorKind::Argument, std::string("unknown command '") + command + "'");
    const auto& c = deref(cfg, "config");
    *out = new curv_run_result{app::run_command(c.value, *cmd, out_dir, c.quick)};
  });
}

int curv_run_result_passed(const curv_run_result* res) { return res && res->value.passed ? 1 : 0; }

const char* curv_run_result_summary(const curv_run_result* res) {
  return res ? res->value.summary.c_str() : "";
}

size_t curv_run_result_file_count(const curv_run_result* res) {
  return res ? res->value.files.size() : 0;
}

const char* curv_run_result_file(const curv_run_result* res, size_t index) {
  if (!res || index >= res->value.files.size()) return nullptr;
  return res->value.files[index].c_str();
}

void curv_run_result_destroy(curv_run_result* res) { delete res; }

curv_status curv_suite_run(const char* suite, uint64_t seed, int quick, curv_suite_report** out) {
  return guard([&] {
    check_out(out);
    require(suite != nullptr, ErrorKind::Argument, "suite is NULL");
    const auto id = verify::parse_suite(suite);
    if (!id) fail(ErrorKind::Argument, std::string("unknown suite '") + suite + "'");
    verify::SuiteConfig cfg;
    cfg.id = *id;
    cfg.seed = seed;
    if (quick) cfg.apply_quick();
    auto* rep = new curv_suite_report{verify::run_suite(cfg), {}};
    rep->csv = verify::report_csv_header() + verify::report_csv_rows(rep->value);
    *out = rep;
  });
}

int curv_suite_report_passed(const curv_suite_report* rep) {
  return rep && rep->value.pass ? 1 : 0;
}

size_t curv_suite_report_case_count(const curv_suite_report* rep) {
  return rep ? rep->value.cases.size() : 0;
}

curv_status curv_suite_report_case(const curv_suite_report* rep, size_t index, curv_case* out) {
  return guard([&] {
    require(out != nullptr, ErrorKind::Argument, "output pointer is NULL");
    const auto& r = deref(rep, "report").value;
    require(index < r.cases.size(), ErrorKind::Argument, "case index out of range");
    const auto& c = r.cases[index];
    *out = curv_case{c.check.c_str(), c.family.c_str(), c.model.c_str(), c.field.c_str(),
                     c.n, c.r, c.inputs.c_str(), c.measured, c.expected, c.residual,
                     c.tolerance, c.pass ? 1 : 0, c.note.c_str()};
  });
}

const char* curv_suite_report_csv(const curv_suite_report* rep) {
  return rep ? rep->csv.c_str() : "";
}

void curv_suite_report_destroy(curv_suite_report* rep) { delete rep; }

}  // extern "C"
