#include "verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "curvature_integrals.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "parallel.hpp"
#include "symmetric_algebra.hpp"

namespace curvatura::verify {

using integrals::ComparisonBreakdown;
using levelset::ScalarField;
using manifold::ChartPoint;
using manifold::ModelManifold;
using quadrature::QuadratureSpec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-300;

// ---------------------------------------------------------------- helpers

class Inputs {
 public:
  Inputs& add(const std::string& key, const std::string& value) {
    if (!text_.empty()) text_ += ';';
    text_ += key + '=' + value;
    return *this;
  }
  Inputs& add(const std::string& key, double value) { return add(key, format_double(value)); }
  Inputs& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  Inputs& add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
  Inputs& add(const std::string& key, const Vector& v) {
    std::string s = "(";
    for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return add(key, s + ")");
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string family_of(const ModelSpec& s) { return s.family; }

std::string model_label(const ModelSpec& s) {
  if (s.family == "constant") return "constant(" + format_double(s.a) + ")";
  if (s.family == "warped") return "warped(" + s.profile + ")";
  return s.family;
}

CaseRecord record(std::string check, const std::string& family, const std::string& model,
                  const std::string& field, int n, int r, const Inputs& inputs, double measured,
                  double expected, double residual, double tolerance, bool pass,
                  std::string note = {}) {
  CaseRecord c;
  c.check = std::move(check);
  c.family = family;
  c.model = model;
  c.field = field;
  c.n = n;
  c.r = r;
  c.inputs = inputs.str();
  c.measured = measured;
  c.expected = expected;
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = pass;
  c.note = std::move(note);
  return c;
}

// Runs `body`, turning library errors into a failing case so that math
// failures are reported rather than aborting the suite.
template <class Body>
void guarded(std::vector<CaseRecord>& out, const CaseRecord& context, Body body) {
  try {
    body();
  } catch (const Error& e) {
    CaseRecord c = context;
    c.pass = false;
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.residual = std::numeric_limits<double>::quiet_NaN();
    c.note = std::string("error: ") + e.what();
    out.push_back(c);
  }
}

void enforce_coverage(SuiteReport& report, const std::set<std::pair<std::string, int>>& expected) {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& c : report.cases) seen.insert({c.family, c.r});
  for (const auto& key : expected) {
    if (seen.count(key)) continue;
    CaseRecord c;
    c.check = "coverage";
    c.family = key.first;
    c.r = key.second;
    c.inputs = "family=" + key.first + ";r=" + std::to_string(key.second);
    c.note = "no case exercised this (family, r) pair";
    report.cases.push_back(c);
  }
}

void finalize(SuiteReport& report, const SuiteConfig& cfg,
              std::chrono::steady_clock::time_point start) {
  report.id = cfg.id;
  report.seed = cfg.seed;
  report.pass = !report.cases.empty() &&
                std::all_of(report.cases.begin(), report.cases.end(),
                            [](const CaseRecord& c) { return c.pass; });
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double relative(double residual, double scale) {
  return std::abs(residual) / std::max(std::abs(scale), kTiny);
}

std::vector<double> abs_eigenvalues(const SymMatrix& h) {
  const auto eig = jacobi_eigen(h);
  std::vector<double> out;
  for (int i = 0; i < h.dim(); ++i) out.push_back(std::abs(eig.values[i]));
  return out;
}

// Scale for sigma_r: the same sum with absolute values, so cancellation
// never shrinks the tolerance below the magnitude of the summed products.
double sigma_scale(const std::vector<double>& abs_eig, int r) {
  return algebra::sigma_elementary(abs_eig, r);
}

SymMatrix random_symmetric(CaseRng& rng, int n) {
  SymMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) h.set(i, j, rng.uniform(-1.0, 1.0));
  return h;
}

Matrix random_rotation(CaseRng& rng, int n) {
  // Gram-Schmidt on a Gaussian matrix.
  Matrix q(n);
  for (int j = 0; j < n; ++j) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    for (int k = 0; k < j; ++k) {
      const Vector prev = q.column(k);
      v = v - dot(prev, v) * prev;
    }
    q.set_column(j, (1.0 / norm(v)) * v);
  }
  return q;
}

double infinity_norm(const Matrix& a) {
  double best = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Worst case tracker for aggregated checks.
struct Worst {
  double value = -1.0;
  double measured = 0.0;
  double expected = 0.0;
  int index = -1;
  int count = 0;

  void offer(double rel, double m, double e, int idx) {
    ++count;
    if (rel > value || std::isnan(rel)) {
      value = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
      measured = m;
      expected = e;
      index = idx;
    }
  }
};

QuadratureSpec spec_with(int angular, int level) { return QuadratureSpec::uniform(angular, level); }

// --------------------------------------------------------------- defaults

std::vector<ModelSpec> models_or(const SuiteConfig& cfg, std::vector<ModelSpec> fallback) {
  return cfg.models.empty() ? fallback : cfg.models;
}

std::vector<int> dims_or(const SuiteConfig& cfg, std::vector<int> fallback) {
  return cfg.dims.empty() ? fallback : cfg.dims;
}

std::vector<std::string> fields_or(const SuiteConfig& cfg, std::vector<std::string> fallback) {
  return cfg.fields.empty() ? fallback : cfg.fields;
}

std::vector<ModelSpec> standard_models() {
  return {ModelSpec::euclidean(), ModelSpec::constant(-1.0), ModelSpec::warped("poly3")};
}

// Random chart point with radius in [0.4, 1.6] that keeps a distance >= 0.1
// from the off-center point of the default offcenter field.
Vector random_point(CaseRng& rng, int n) {
  while (true) {
    Vector dir(n);
    for (int i = 0; i < n; ++i) dir[i] = rng.normal();
    const double len = norm(dir);
    if (len < 1e-6) continue;
    const double radius = rng.uniform(0.4, 1.6);
    Vector x = (radius / len) * dir;
    Vector off = x;
    off[0] -= 0.3;
    if (norm(off) >= 0.1) return x;
  }
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto p : parts) h = splitmix64(h ^ p);
  return h;
}

}  // namespace

// =================================================================== public

std::string suite_name(SuiteId id) {
  switch (id) {
    case SuiteId::Algebra: return "algebra";
    case SuiteId::Pointwise: return "pointwise";
    case SuiteId::Comparison: return "comparison";
    case SuiteId::Inequality: return "inequality";
    case SuiteId::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::optional<SuiteId> parse_suite(const std::string& name) {
  for (auto id : all_suites())
    if (suite_name(id) == name) return id;
  return std::nullopt;
}

std::vector<SuiteId> all_suites() {
  return {SuiteId::Algebra, SuiteId::Pointwise, SuiteId::Comparison, SuiteId::Inequality,
          SuiteId::Asymptotic};
}

void SuiteConfig::apply_quick() {
  quick = true;
  matrices = std::min(matrices, 100);
  points = std::min(points, 20);
  fd_points = std::min(fd_points, 10);
}

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const CaseRecord& c) { return !c.pass; }));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CaseRng::CaseRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(splitmix64(seed ^ splitmix64(stream))), engine_(seed_) {}

double CaseRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double CaseRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CaseRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// ================================================================= algebra

SuiteReport run_algebra_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  const auto& tol = cfg.tol;
  const auto dims = dims_or(cfg, {2, 3, 4, 5, 6});
  std::set<std::pair<std::string, int>> coverage;

  for (int n : dims) {
    require(n >= 1 && n <= 6, ErrorKind::Argument, "algebra suite dimensions must be in [1, 6]");
    const int count = cfg.matrices;
    // Partial-derivative form is the expensive delta contraction; a subset suffices.
    const int partial_count = std::min(count, cfg.quick ? 10 : 50);

    struct PerMatrix {
      std::vector<double> sigma, trace, partial, power, invariance;
      double cayley = 0.0, cofactor = -1.0;
      std::vector<double> sigma_m, sigma_e;
    };
    std::vector<PerMatrix> results(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t idx) {
      CaseRng rng(cfg.seed, stream_key({1, static_cast<std::uint64_t>(n), idx}));
      const SymMatrix h = random_symmetric(rng, n);
      const Matrix rot = random_rotation(rng, n);
      const auto abs_eig = abs_eigenvalues(h);
      auto& out = results[idx];
      for (int r = 0; r <= n; ++r) {
        const double eig = algebra::sigma_hessian_eigen(h, r);
        const double del = algebra::sigma_hessian_delta(h, r);
        const double scale = sigma_scale(abs_eig, r);
        out.sigma.push_back(relative(eig - del, scale));
        out.sigma_m.push_back(del);
        out.sigma_e.push_back(eig);
        const SymMatrix rotated = SymMatrix::from(rot * h.matrix() * transpose(rot));
        out.invariance.push_back(relative(algebra::sigma_hessian_eigen(rotated, r) - eig, scale));
      }
      for (int r = 0; r < n; ++r) {
        out.trace.push_back(relative(algebra::trace_identity_residual(h, r),
                                     (r + 1) * sigma_scale(abs_eig, r + 1)));
        const auto t = algebra::newton_operator(h, r).matrix.matrix();
        const double tscale = std::max(sigma_scale(abs_eig, r), kTiny);
        out.power.push_back(max_abs(algebra::newton_operator_power_sum(h, r).matrix() - t) / tscale);
        if (static_cast<int>(idx) < partial_count)
          out.partial.push_back(max_abs(algebra::newton_partial_form(h, r).matrix() - t) / tscale);
      }
      const double hnorm = std::max(1.0, infinity_norm(h.matrix()));
      out.cayley = max_abs(algebra::newton_operator(h, n).matrix.matrix()) / std::pow(hnorm, n);
      const double det = determinant(h.matrix());
      if (std::abs(det) >= 1e-8 * std::pow(hnorm, n)) {
        const Matrix inv = inverse(h.matrix());
        const Matrix cof = algebra::newton_operator(h, n - 1).matrix.matrix();
        out.cofactor = max_abs(cof - det * inv) / (std::abs(det) * max_abs(inv));
      }
    });

    auto emit = [&](const std::string& check, int r, const Worst& w, double tolerance,
                    const std::string& note = {}) {
      Inputs in;
      in.add("seed", cfg.seed).add("n", n).add("r", r).add("matrices", w.count);
      if (w.index >= 0) in.add("worst_matrix", w.index);
      report.cases.push_back(record(check, "algebra", "matrix", "-", n, r, in, w.value, 0.0,
                                    w.value, tolerance, w.count > 0 && w.value <= tolerance, note));
      coverage.insert({"algebra", r});
    };

    for (int r = 0; r <= n; ++r) {
      Worst sigma, inv;
      for (int i = 0; i < count; ++i) {
        sigma.offer(results[i].sigma[r], results[i].sigma_e[r], results[i].sigma_m[r], i);
        inv.offer(results[i].invariance[r], 0, 0, i);
      }
      emit("sigma_dual_path", r, sigma, tol.sigma);
      emit("orthogonal_invariance", r, inv, tol.sigma);
    }
    for (int r = 0; r < n; ++r) {
      Worst trace, power, partial;
      for (int i = 0; i < count; ++i) {
        trace.offer(results[i].trace[r], 0, 0, i);
        power.offer(results[i].power[r], 0, 0, i);
        if (i < partial_count) partial.offer(results[i].partial[r], 0, 0, i);
      }
      emit("trace_identity", r, trace, tol.trace);
      emit("newton_power_sum", r, power, tol.newton_forms);
      emit("newton_partial_form", r, partial, tol.newton_forms);
    }
    {
      Worst cayley, cofactor;
      int skipped = 0;
      for (int i = 0; i < count; ++i) {
        cayley.offer(results[i].cayley, 0, 0, i);
        if (results[i].cofactor >= 0.0)
          cofactor.offer(results[i].cofactor, 0, 0, i);
        else
          ++skipped;
      }
      emit("cayley_hamilton", n, cayley, tol.cayley_hamilton);
      emit("cofactor", n - 1, cofactor, tol.cofactor,
           skipped ? std::to_string(skipped) + " near-singular matrices skipped" : "");
    }
    // T_r(c I) = C(n-1, r) c^r I
    {
      CaseRng rng(cfg.seed, stream_key({2, static_cast<std::uint64_t>(n)}));
      const double c = rng.uniform(0.5, 2.0);
      for (int r = 0; r < n; ++r) {
        const auto t = algebra::newton_operator(SymMatrix::diagonal(Vector(n, c)), r).matrix.matrix();
        const double expected = static_cast<double>(algebra::binomial(n - 1, r)) * std::pow(c, r);
        const double err = max_abs(t - expected * Matrix::identity(n));
        Inputs in;
        in.add("seed", cfg.seed).add("n", n).add("r", r).add("c", c);
        report.cases.push_back(record("newton_scalar", "algebra", "matrix", "-", n, r, in, t(0, 0),
                                      expected, relative(err, expected), tol.newton_forms,
                                      relative(err, expected) <= tol.newton_forms));
      }
    }
  }
  enforce_coverage(report, coverage);
  finalize(report, cfg, start);
  return report;
}

// =============================================================== pointwise

SuiteReport run_pointwise_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  const auto& tol = cfg.tol;
  const auto models = models_or(cfg, standard_models());
  const auto fields = fields_or(cfg, {"radial", "radial_sq", "quadratic", "offcenter"});
  const auto dims = dims_or(cfg, {2, 3, 4, 5});
  std::set<std::pair<std::string, int>> coverage;

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const ModelSpec& ms = models[mi];
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
      for (int n : dims) {
        for (int r = 0; r < n; ++r) coverage.insert({family_of(ms), r});
        const ModelManifold m = build_model(ms, n);
        const FieldSpec fs = default_field(fields[fi], n);
        const ScalarField u = build_field(fs, n);
        const std::string label = model_label(ms);
        auto inputs_for = [&](const char* what, int r, int point, const Vector& x) {
          Inputs in;
          in.add("seed", cfg.seed).add("model", label).add("field", fs.kind).add("n", n);
          in.add("r", r).add(what, point).add("x", x);
          return in;
        };
        auto point_at = [&](int point) {
          CaseRng rng(cfg.seed, stream_key({3, mi, fi, static_cast<std::uint64_t>(n),
                                            static_cast<std::uint64_t>(point)}));
          return random_point(rng, n);
        };
        const CaseRecord context =
            record("setup", family_of(ms), label, fs.kind, n, 0, Inputs{}, 0, 0, 0, 0, false);

        guarded(report.cases, context, [&] {
          u.check_compatible(m);
          // sigma_r against the Newton quotient at random points.
          const int points = cfg.points;
          std::vector<std::vector<double>> rel(static_cast<std::size_t>(points));
          std::vector<Vector> xs(static_cast<std::size_t>(points));
          parallel_for(static_cast<std::size_t>(points), [&](std::size_t p) {
            xs[p] = point_at(static_cast<int>(p));
            const ChartPoint cp{manifold::Chart::Cartesian, xs[p]};
            for (int r = 0; r < n; ++r) {
              const auto check = levelset::reilly2_check(u, m, cp, r);
              rel[p].push_back(relative(check.residual, std::max(check.scale, 1.0e-300)));
            }
          });
          for (int r = 0; r < n; ++r) {
            Worst w;
            for (int p = 0; p < points; ++p) w.offer(rel[p][r], 0, 0, p);
            const Vector worst_x = w.index >= 0 ? xs[w.index] : Vector(n);
            report.cases.push_back(record("reilly2", family_of(ms), label, fs.kind, n, r,
                                          inputs_for("worst_point", r, w.index, worst_x), w.value,
                                          0.0, w.value, tol.reilly2, w.value <= tol.reilly2));
          }
        });

        // Divergence formula against finite differences of T_r: relative
        // agreement at the default step where the divergence is nonzero, and
        // second-order convergence of the difference everywhere.
        guarded(report.cases, context, [&] {
          const int points = std::max(1, cfg.fd_points / 5);
          const bool flat = m.family() == manifold::Family::Euclidean ||
                            (m.family() == manifold::Family::ConstantCurvature && m.curvature() == 0.0);
          for (int r = 1; r < n; ++r) {
            Worst fd, zero;
            double worst_order = std::numeric_limits<double>::infinity();
            int order_index = -1;
            std::vector<Vector> xs;
            for (int p = 0; p < points; ++p) {
              const Vector x = point_at(1000 + p);
              xs.push_back(x);
              const ChartPoint cp{manifold::Chart::Cartesian, x};
              const Vector contracted = levelset::div_newton_frame(u, m, cp, r);
              const double step = levelset::default_step(cp);
              // Richardson combination of h and h/2 removes the O(h^2) term.
              const Vector finite =
                  (4.0 / 3.0) * levelset::div_newton_finite_difference(u, m, cp, r, 0.5 * step) -
                  (1.0 / 3.0) * levelset::div_newton_finite_difference(u, m, cp, r, step);
              fd.offer(max_abs(contracted - finite) / std::max(max_abs(contracted), 1.0), 0, 0, p);
              zero.offer(max_abs(contracted), 0, 0, p);
              const double h = 1e-2 * (1.0 + norm(x));
              const double coarse =
                  max_abs(contracted - levelset::div_newton_finite_difference(u, m, cp, r, h));
              const double fine =
                  max_abs(contracted - levelset::div_newton_finite_difference(u, m, cp, r, 0.5 * h));
              if (coarse > 1e-9) {
                const double order = std::log2(coarse / std::max(fine, kTiny));
                if (order < worst_order) {
                  worst_order = order;
                  order_index = p;
                }
              }
            }
            if (!flat)
              report.cases.push_back(record("div_newton_fd", family_of(ms), label, fs.kind, n, r,
                                            inputs_for("worst_point", r, fd.index, xs[fd.index]),
                                            fd.value, 0.0, fd.value, tol.div_newton,
                                            fd.value <= tol.div_newton));
            const Vector ox = order_index >= 0 ? xs[order_index] : Vector(n);
            report.cases.push_back(record("div_newton_fd_order", family_of(ms), label, fs.kind, n,
                                          r, inputs_for("worst_point", r, order_index, ox),
                                          worst_order, 2.0, 2.0 - worst_order, tol.fd_order,
                                          worst_order >= tol.fd_order));
            if (flat)
              report.cases.push_back(record("div_newton_flat", family_of(ms), label, fs.kind, n, r,
                                            inputs_for("worst_point", r, zero.index, xs[zero.index]),
                                            zero.value, 0.0, zero.value, tol.flat_div,
                                            zero.value <= tol.flat_div));
          }
        });

        // divergence identity for T_{r-1}: observed order of the finite-difference residual.
        guarded(report.cases, context, [&] {
          const int points = cfg.fd_points;
          for (int r = 1; r < n; ++r) {
            std::vector<double> orders(static_cast<std::size_t>(points),
                                       std::numeric_limits<double>::infinity());
            std::vector<Vector> xs(static_cast<std::size_t>(points));
            parallel_for(static_cast<std::size_t>(points), [&](std::size_t p) {
              xs[p] = point_at(2000 + static_cast<int>(p));
              const ChartPoint cp{manifold::Chart::Cartesian, xs[p]};
              const double h = 5e-3 * (1.0 + norm(xs[p]));
              const double coarse = levelset::reilly1_residual(u, m, cp, r, h);
              const double fine = levelset::reilly1_residual(u, m, cp, r, 0.5 * h);
              // Below the roundoff level there is no truncation error left to measure.
              if (coarse > 1e-9) orders[p] = std::log2(coarse / std::max(fine, kTiny));
            });
            double worst = std::numeric_limits<double>::infinity();
            int worst_index = -1, exact = 0;
            for (int p = 0; p < points; ++p) {
              if (std::isinf(orders[p])) ++exact;
              if (orders[p] < worst) {
                worst = orders[p];
                worst_index = p;
              }
            }
            const Vector x = worst_index >= 0 ? xs[worst_index] : Vector(n);
            const bool pass = points > 0 && worst >= tol.fd_order;
            report.cases.push_back(record(
                "reilly1_order", family_of(ms), label, fs.kind, n, r,
                inputs_for("worst_point", r, worst_index, x), worst, 2.0, 2.0 - worst, tol.fd_order,
                pass, exact ? std::to_string(exact) + " points exact to roundoff" : ""));
          }
        });
      }
    }
  }
  enforce_coverage(report, coverage);
  finalize(report, cfg, start);
  return report;
}

// ============================================================== comparison

namespace {

struct ComparisonCase {
  ModelSpec model;
  FieldSpec field;
  int n;
  int r;
  double c1, c2;
  int angular, level;
  double tolerance;
};

std::string field_label(const FieldSpec& f) {
  if (f.kind == "offcenter") return "offcenter(" + format_double(f.center.empty() ? 0 : f.center[0]) + ")";
  if (f.kind == "quadratic") {
    std::string s = "quadratic(";
    for (std::size_t i = 0; i < f.q.size(); ++i) s += (i ? " " : "") + format_double(f.q[i][i]);
    return s + ")";
  }
  return f.kind;
}

Inputs comparison_inputs(const SuiteConfig& cfg, const ComparisonCase& c) {
  Inputs in;
  in.add("seed", cfg.seed).add("model", model_label(c.model)).add("field", field_label(c.field));
  in.add("n", c.n).add("r", c.r).add("c1", c.c1).add("c2", c.c2);
  in.add("angular_order", c.angular).add("level_order", c.level);
  return in;
}

// Radial oracles on the sphere family about the pole: M_r(S_t) and the two
// nonzero right-hand side densities per unit t.
struct RadialOracle {
  double lhs, principal, sectional;
};

RadialOracle radial_oracle(const ModelManifold& m, int r, double t1, double t2) {
  const int n = m.dim();
  const auto& p = m.profile();
  const double sphere = manifold::unit_sphere_volume(n);
  RadialOracle o{};
  o.lhs = manifold::sphere_total_mean_curvature(m, r, t2) -
          manifold::sphere_total_mean_curvature(m, r, t1);
  o.principal =
      quadrature::radial_integral(
          [&](double t) {
            const double k = p.df(t) / p.f(t);
            return (r + 1) * static_cast<double>(algebra::binomial(n - 1, r + 1)) *
                   std::pow(k, r + 1) * std::pow(p.f(t), n - 1) * sphere;
          },
          t1, t2)
          .value;
  o.sectional =
      r == 0 ? 0.0
             : quadrature::radial_integral(
                   [&](double t) {
                     const double k = p.df(t) / p.f(t);
                     return r * static_cast<double>(algebra::binomial(n - 1, r)) *
                            std::pow(k, r - 1) * (p.ddf(t) / p.f(t)) * std::pow(p.f(t), n - 1) *
                            sphere;
                   },
                   t1, t2)
                   .value;
  return o;
}

void comparison_case(SuiteReport& report, const SuiteConfig& cfg, const ComparisonCase& c,
                     bool radial_oracles, bool constant_paths, bool expect_mixed) {
  const auto& tol = cfg.tol;
  const std::string family = family_of(c.model);
  const std::string label = model_label(c.model);
  const std::string field = field_label(c.field);
  const Inputs in = comparison_inputs(cfg, c);
  const CaseRecord context = record("thm31", family, label, field, c.n, c.r, in, 0, 0, 0,
                                    c.tolerance, false);
  guarded(report.cases, context, [&] {
    const ModelManifold m = build_model(c.model, c.n);
    const ScalarField u = build_field(c.field, c.n);
    const QuadratureSpec spec = spec_with(c.angular, c.level);
    const ComparisonBreakdown b = integrals::comparison_rhs(u, m, c.c1, c.c2, c.r, spec);
    const double rel = b.relative_residual();
    const bool within_budget = std::abs(b.residual) <= b.error_budget;
    std::string note = "lhs=" + format_double(b.lhs) + " principal=" + format_double(b.term_principal) +
                       " sectional=" + format_double(b.term_sectional) +
                       " mixed=" + format_double(b.term_mixed) +
                       " budget=" + format_double(b.error_budget);
    if (!within_budget) note += " residual exceeds error budget";
    report.cases.push_back(record("thm31", family, label, field, c.n, c.r, in, b.lhs, b.rhs(), rel,
                                  c.tolerance, rel <= c.tolerance && within_budget, note));
    report.cases.push_back(record("index_sets_vs_contraction", family, label, field, c.n, c.r, in,
                                  b.contraction_gap, 0.0, relative(b.contraction_gap, b.scale()),
                                  1e-10, relative(b.contraction_gap, b.scale()) <= 1e-10));

    if (radial_oracles) {
      const RadialOracle o = radial_oracle(m, c.r, c.c1, c.c2);
      const double scale = b.scale();
      const double lhs_rel = relative(b.lhs - o.lhs, scale);
      const double p_rel = relative(b.term_principal - o.principal, scale);
      const double s_rel = relative(b.term_sectional - o.sectional, scale);
      const double m_rel = relative(b.term_mixed, scale);
      const double t = tol.comparison_radial;
      report.cases.push_back(record("lhs_vs_radial_oracle", family, label, field, c.n, c.r, in,
                                    b.lhs, o.lhs, lhs_rel, t, lhs_rel <= t));
      report.cases.push_back(record("principal_vs_radial_oracle", family, label, field, c.n, c.r,
                                    in, b.term_principal, o.principal, p_rel, t, p_rel <= t));
      report.cases.push_back(record("sectional_vs_radial_oracle", family, label, field, c.n, c.r,
                                    in, b.term_sectional, o.sectional, s_rel, t, s_rel <= t));
      report.cases.push_back(record("mixed_vanishes", family, label, field, c.n, c.r, in,
                                    b.term_mixed, 0.0, m_rel, 1e-12, m_rel <= 1e-12,
                                    "|grad u| is constant on radial distance fields"));
    }
    if (expect_mixed && c.r >= 2) {
      const bool active = std::abs(b.term_mixed) > cfg.tol.strict_factor * b.error_budget;
      report.cases.push_back(record("second_sum_active", family, label, field, c.n, c.r, in,
                                    b.term_mixed, 0.0, std::abs(b.term_mixed),
                                    cfg.tol.strict_factor * b.error_budget, active,
                                    "second correction sum must be resolved above the budget"));
    }
    if (constant_paths) {
      const auto bc = integrals::comparison_rhs_constant(u, m, c.c1, c.c2, c.r, spec);
      const double agree = relative(bc.rhs() - b.rhs(), std::max(b.scale(), bc.scale()));
      report.cases.push_back(record("cc_two_paths", family, label, field, c.n, c.r, in, bc.rhs(),
                                    b.rhs(), agree, tol.constant_paths,
                                    agree <= tol.constant_paths));
      if (c.r == 1) {
        const auto br = integrals::ricci_comparison(u, m, c.c1, c.c2, spec);
        const double ricci =
            relative(br.term_sectional - b.term_sectional,
                     std::max({std::abs(b.term_sectional), std::abs(br.term_sectional), b.scale() * 1e-3}));
        report.cases.push_back(record("g1_ricci_path", family, label, field, c.n, c.r, in,
                                      br.term_sectional, b.term_sectional, ricci, tol.ricci_paths,
                                      ricci <= tol.ricci_paths));
      }
    }
  });
}

void solanes_case(SuiteReport& report, const SuiteConfig& cfg, double a, int n, double rho,
                  int angular) {
  const ModelSpec ms = a == 0.0 ? ModelSpec::euclidean() : ModelSpec::constant(a);
  const std::string family = family_of(ms);
  const std::string label = model_label(ms);
  Inputs in;
  in.add("seed", cfg.seed).add("model", label).add("n", n).add("rho", rho);
  in.add("angular_order", angular);
  const CaseRecord context = record("solanes", family, label, "radial", n, n - 1, in, 0, 0, 0,
                                    cfg.tol.solanes, false);
  guarded(report.cases, context, [&] {
    const ModelManifold m = build_model(ms, n);
    const ScalarField u = ScalarField::radial_distance(n);
    const QuadratureSpec spec = spec_with(angular, 8);
    std::map<int, double> lower;
    for (int i = 1; i <= n / 2; ++i) {
      const int j = n - 2 * i - 1;
      lower[j] = integrals::total_mean_curvature(u, m, rho, j, spec).value;
    }
    const double top = integrals::total_mean_curvature(u, m, rho, n - 1, spec).value;
    const double predicted = integrals::solanes_prediction(lower, a, n);
    const double rel = relative(top - predicted, top);
    std::string note;
    for (const auto& [j, v] : lower) note += "M_" + std::to_string(j) + "=" + format_double(v) + " ";
    report.cases.push_back(record("solanes", family, label, "radial", n, n - 1, in, top, predicted,
                                  rel, cfg.tol.solanes, rel <= cfg.tol.solanes, note));
    const double oracle = manifold::sphere_total_mean_curvature(m, n - 1, rho);
    const double orel = relative(top - oracle, oracle);
    report.cases.push_back(record("top_curvature_vs_sphere_oracle", family, label, "radial", n,
                                  n - 1, in, top, oracle, orel, cfg.tol.solanes,
                                  orel <= cfg.tol.solanes));
  });
}

}  // namespace

SuiteReport run_comparison_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  const auto& tol = cfg.tol;
  const bool quick = cfg.quick;
  const int radial_angular = cfg.angular_order > 0 ? cfg.angular_order : 8;
  const int radial_level = cfg.level_order > 0 ? cfg.level_order : 16;
  std::set<std::pair<std::string, int>> coverage;

  // Nested geodesic spheres in constant curvature, including a = 0.
  const std::vector<double> curvatures = quick ? std::vector<double>{0.0, -1.0}
                                               : std::vector<double>{0.0, -0.5, -1.0};
  const std::vector<int> sphere_dims = quick ? std::vector<int>{3} : dims_or(cfg, {3, 4});
  for (double a : curvatures)
    for (int n : sphere_dims)
      for (int r = 0; r < n; ++r) {
        ComparisonCase c{ModelSpec::constant(a), default_field("radial", n), n, r, 0.5, 1.0,
                         radial_angular, radial_level, tol.comparison_radial};
        comparison_case(report, cfg, c, true, true, false);
        coverage.insert({"constant", r});
      }

  // Warped poly3, radial, n = 4.
  for (int r = 0; r < 4; ++r) {
    ComparisonCase c{ModelSpec::warped("poly3"), default_field("radial", 4), 4, r, 0.5, 1.5,
                     radial_angular, radial_level, tol.comparison_radial};
    comparison_case(report, cfg, c, true, false, false);
    coverage.insert({"warped", r});
  }

  // Euclidean ellipsoids x^2 + y^2 + 4 z^2.
  {
    FieldSpec f;
    f.kind = "quadratic";
    f.q = {{1, 0, 0}, {0, 1, 0}, {0, 0, 4}};
    for (int r = 0; r < 3; ++r) {
      ComparisonCase c{ModelSpec::euclidean(), f, 3, r, 0.5, 1.0, quick ? 48 : 64, quick ? 24 : 32,
                       tol.comparison_field};
      comparison_case(report, cfg, c, false, true, false);
      coverage.insert({"euclidean", r});
    }
  }

  // Off-center distance fields: hyperbolic (second sum vanishes identically)
  // and warped poly3 (second sum active).
  for (int r = 1; r <= 2; ++r) {
    ComparisonCase c{ModelSpec::constant(-1.0), default_field("offcenter", 3), 3, r, 0.5, 1.0,
                     quick ? 16 : 32, 16, tol.comparison_field};
    comparison_case(report, cfg, c, false, true, false);
  }
  const std::vector<int> warped_dims = quick ? std::vector<int>{3} : std::vector<int>{3, 4};
  for (int n : warped_dims)
    for (int r = 1; r < n; ++r) {
      ComparisonCase c{ModelSpec::warped("poly3"), default_field("offcenter", n), n, r, 0.5, 1.0,
                       n == 3 ? (quick ? 16 : 32) : 12, 12, tol.comparison_field};
      comparison_case(report, cfg, c, false, false, true);
    }

  // Double-factorial recursion for M_{n-1} on geodesic spheres.
  for (int n : {3, 4, 5}) {
    if (quick && n == 4) continue;
    for (double a : {0.0, -0.5, -1.0})
      for (double rho : {0.5, 1.0}) solanes_case(report, cfg, a, n, rho, n == 5 ? 12 : 8);
  }
  {
    // Closed form for n = 3, a = -1, rho = 1.
    const ModelManifold m = ModelManifold::constant_curvature(-1.0, 3);
    const auto top = integrals::total_mean_curvature(ScalarField::radial_distance(3), m, 1.0, 2,
                                                     spec_with(8, 8));
    const double expected = 4 * kPi * std::cosh(1.0) * std::cosh(1.0);
    const double rel = relative(top.value - expected, expected);
    Inputs in;
    in.add("seed", cfg.seed).add("model", "constant(-1)").add("n", 3).add("rho", 1.0);
    report.cases.push_back(record("solanes_closed_form", "constant", "constant(-1)", "radial", 3,
                                  2, in, top.value, expected, rel, tol.solanes,
                                  rel <= tol.solanes));
  }

  enforce_coverage(report, coverage);
  finalize(report, cfg, start);
  return report;
}

// ============================================================== inequality

SuiteReport run_inequality_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  const auto& tol = cfg.tol;
  const bool quick = cfg.quick;
  const double strict = tol.strict_factor;
  const int angular = cfg.angular_order > 0 ? cfg.angular_order : 8;
  std::set<std::pair<std::string, int>> coverage;

  // Monotonicity across nested levels.
  struct Pair {
    double inner, outer;
  };
  const std::vector<ModelSpec> models =
      models_or(cfg, {ModelSpec::euclidean(), ModelSpec::constant(-0.5), ModelSpec::constant(-1.0),
                      ModelSpec::warped("poly3")});
  const std::vector<int> dims = dims_or(cfg, quick ? std::vector<int>{3} : std::vector<int>{3, 4});
  const std::vector<Pair> pairs = {{0.5, 1.0}, {1.0, 1.5}};

  auto monotone_case = [&](const ModelSpec& ms, const FieldSpec& fs, int n, int r, Pair pr,
                           int order, bool expect_strict, const std::string& note) {
    const std::string family = family_of(ms);
    const std::string label = model_label(ms);
    Inputs in;
    in.add("seed", cfg.seed).add("model", label).add("field", field_label(fs)).add("n", n);
    in.add("r", r).add("inner", pr.inner).add("outer", pr.outer).add("angular_order", order);
    const CaseRecord context =
        record("monotone", family, label, field_label(fs), n, r, in, 0, 0, 0, 0, false);
    coverage.insert({family, r});
    guarded(report.cases, context, [&] {
      const ModelManifold m = build_model(ms, n);
      const ScalarField u = build_field(fs, n);
      const auto spec = spec_with(order, 8);
      const auto inner = integrals::total_mean_curvature(u, m, pr.inner, r, spec);
      const auto outer = integrals::total_mean_curvature(u, m, pr.outer, r, spec);
      const double diff = outer.value - inner.value;
      const double budget = 10.0 * (inner.error_estimate + outer.error_estimate);
      const double needed = expect_strict ? strict * budget : -budget;
      const bool pass = expect_strict ? diff > needed : diff >= needed;
      report.cases.push_back(record(expect_strict ? "monotone_strict" : "monotone", family, label,
                                    field_label(fs), n, r, in, diff, 0.0, diff, needed, pass,
                                    note + " budget=" + format_double(budget)));
    });
  };

  for (const auto& ms : models)
    for (int n : dims)
      for (int r = 1; r < n; ++r)
        for (const Pair& pr : pairs) {
          const bool flat_top = ms.family == "euclidean" && r == n - 1;
          std::string note = r == 1 ? "M_1 monotone for nested convex;" : "";
          note += " outer parallels (|grad u| = 1);";
          if (ms.family != "warped") note += " constant curvature;";
          if (flat_top) note += " flat Gauss-Bonnet equality;";
          monotone_case(ms, default_field("radial", n), n, r, pr, angular, !flat_top, note);
        }
  {
    FieldSpec f;
    f.kind = "quadratic";
    f.q = {{1, 0, 0}, {0, 1, 0}, {0, 0, 4}};
    for (int r = 1; r <= 2; ++r)
      for (const Pair& pr : std::vector<Pair>{{0.5, 1.0}, {1.0, 2.0}})
        monotone_case(ModelSpec::euclidean(), f, 3, r, pr, quick ? 48 : 64, r == 1,
                      r == 1 ? "nested convex ellipsoids" : "flat Gauss-Bonnet equality");
  }

  // M_1 against the volume bounds on hyperbolic balls.
  for (int n : {3, 4}) {
    const std::vector<double> radii = quick ? std::vector<double>{0.5, 1.0}
                                            : std::vector<double>{0.25, 0.5, 1.0, 2.0};
    for (double rho : radii) {
      const ModelSpec ms = ModelSpec::constant(-1.0);
      Inputs in;
      in.add("seed", cfg.seed).add("model", "constant(-1)").add("n", n).add("rho", rho);
      in.add("angular_order", angular);
      const CaseRecord context =
          record("m1_volume_bound", "constant", "constant(-1)", "radial", n, 1, in, 0, 0, 0, 0, false);
      guarded(report.cases, context, [&] {
        const ModelManifold m = build_model(ms, n);
        const ScalarField u = ScalarField::radial_distance(n);
        const auto spec = spec_with(angular, 8);
        const auto m1 = integrals::total_mean_curvature(u, m, rho, 1, spec);
        const auto vol = integrals::total_mean_curvature(u, m, rho, -1, spec);
        const auto bound = integrals::m1_volume_bound(-1.0, vol.value, n);
        const double budget = 10.0 * (m1.error_estimate + (n - 1) * vol.error_estimate);
        const double margin = m1.value - bound.general;
        report.cases.push_back(record("m1_volume_bound_strict", "constant", "constant(-1)",
                                      "radial", n, 1, in, margin, 0.0, margin, strict * budget,
                                      margin > strict * budget));
        if (bound.dim3) {
          const double gap = m1.value - *bound.dim3;
          const double expected = 8 * kPi * rho;
          const double rel = relative(gap - expected, expected);
          report.cases.push_back(record("m1_minus_4vol", "constant", "constant(-1)", "radial", n,
                                        1, in, gap, expected, rel, tol.volume_bound,
                                        rel <= tol.volume_bound));
          report.cases.push_back(record("m1_volume_bound_dim3_strict", "constant", "constant(-1)",
                                        "radial", n, 1, in, gap, 0.0, gap, strict * budget,
                                        gap > strict * budget));
        }
      });
    }
  }

  // Ball comparison against the flat bound, and the equality cases.
  for (int n : {3, 4}) {
    if (quick && n == 4) continue;
    for (double rho : {0.5, 1.0, 2.0})
      for (int r = 1; r < n; ++r) {
        Inputs in;
        in.add("seed", cfg.seed).add("n", n).add("r", r).add("rho", rho);
        in.add("angular_order", angular);
        const CaseRecord context =
            record("ball_bound", "warped", "warped(poly3)", "radial", n, r, in, 0, 0, 0, 0, false);
        coverage.insert({"warped", r});
        guarded(report.cases, context, [&] {
          const ScalarField u = ScalarField::radial_distance(n);
          const auto spec = spec_with(angular, 8);
          const auto poly = integrals::total_mean_curvature(
              u, build_model(ModelSpec::warped("poly3"), n), rho, r, spec);
          const double flat_bound = integrals::ball_bound(r, rho, 0.0, n);
          const double budget = 10.0 * poly.error_estimate;
          const double margin = poly.value - flat_bound;
          report.cases.push_back(record("ball_bound_strict", "warped", "warped(poly3)", "radial", n,
                                        r, in, poly.value, flat_bound, margin, strict * budget,
                                        margin > strict * budget));

          const auto linear = integrals::total_mean_curvature(
              u, build_model(ModelSpec::warped("linear"), n), rho, r, spec);
          const double lin_rel = relative(linear.value - flat_bound, flat_bound);
          report.cases.push_back(record("ball_bound_equality", "warped", "warped(linear)",
                                        "radial", n, r, in, linear.value, flat_bound, lin_rel,
                                        tol.ball_equality, lin_rel <= tol.ball_equality));

          const auto hyper = integrals::total_mean_curvature(
              u, build_model(ModelSpec::warped("sinh"), n), rho, r, spec);
          const double hyp_bound = integrals::ball_bound(r, rho, -1.0, n);
          const double hyp_rel = relative(hyper.value - hyp_bound, hyp_bound);
          report.cases.push_back(record("ball_bound_equality", "warped", "warped(sinh)", "radial",
                                        n, r, in, hyper.value, hyp_bound, hyp_rel,
                                        tol.ball_equality, hyp_rel <= tol.ball_equality));
        });
      }
  }

  enforce_coverage(report, coverage);
  finalize(report, cfg, start);
  return report;
}

// ============================================================== asymptotic

SuiteReport run_asymptotic_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  const auto& tol = cfg.tol;
  const auto models = models_or(cfg, standard_models());
  const auto dims = dims_or(cfg, {3});
  const int angular = cfg.angular_order > 0 ? cfg.angular_order : 8;
  std::set<std::pair<std::string, int>> coverage;

  std::vector<double> radii;
  for (int k = 0; k <= 6; ++k) radii.push_back(0.01 * std::pow(2.0, 0.5 * k));

  for (const auto& ms : models)
    for (int n : dims)
      for (int r = 0; r < n; ++r) {
        const std::string family = family_of(ms);
        const std::string label = model_label(ms);
        Inputs in;
        in.add("seed", cfg.seed).add("model", label).add("n", n).add("r", r);
        in.add("rho_min", radii.front()).add("rho_max", radii.back()).add("angular_order", angular);
        const CaseRecord context =
            record("slope", family, label, "radial", n, r, in, 0, 0, 0, tol.slope, false);
        coverage.insert({family, r});
        guarded(report.cases, context, [&] {
          const ModelManifold m = build_model(ms, n);
          const ScalarField u = ScalarField::radial_distance(n);
          const auto spec = spec_with(angular, 8);
          std::vector<double> values;
          for (double rho : radii)
            values.push_back(integrals::total_mean_curvature(u, m, rho, r, spec).value);

          // Least-squares slope of log M_r against log rho.
          double sx = 0, sy = 0, sxx = 0, sxy = 0;
          const double k = static_cast<double>(radii.size());
          for (std::size_t i = 0; i < radii.size(); ++i) {
            const double x = std::log(radii[i]), y = std::log(values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
          }
          const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
          const double expected = n - 1 - r;
          const double dev = std::abs(slope - expected);
          report.cases.push_back(record("slope", family, label, "radial", n, r, in, slope,
                                        expected, dev, tol.slope, dev <= tol.slope));
          if (family == "euclidean")
            report.cases.push_back(record("slope_exact", family, label, "radial", n, r, in, slope,
                                          expected, dev, 1e-10, dev <= 1e-10));

          // Quadratic correction: the constant fitted at the largest radius
          // must bound the deviation at every smaller radius.
          const double lead = static_cast<double>(algebra::binomial(n - 1, r)) *
                              manifold::unit_sphere_volume(n);
          std::vector<double> dev_ratio;
          for (std::size_t i = 0; i < radii.size(); ++i)
            dev_ratio.push_back(std::abs(values[i] / (lead * std::pow(radii[i], n - 1 - r)) - 1.0));
          const double fitted = dev_ratio.back() / (radii.back() * radii.back());
          double worst = 0.0;
          for (std::size_t i = 0; i < radii.size(); ++i)
            worst = std::max(worst, dev_ratio[i] - (1.5 * fitted * radii[i] * radii[i] + 1e-9));
          report.cases.push_back(record("quadratic_correction", family, label, "radial", n, r, in,
                                        fitted, 0.0, worst, 0.0, worst <= 0.0,
                                        "measured is the fitted constant C in |ratio - 1| <= C rho^2"));

          if (r == n - 1) {
            const double limit = manifold::unit_sphere_volume(n);
            const double rel = relative(values.front() - limit, limit);
            report.cases.push_back(record("top_limit", family, label, "radial", n, r, in,
                                          values.front(), limit, rel, tol.limit, rel <= tol.limit));
          }
        });
      }

  enforce_coverage(report, coverage);
  finalize(report, cfg, start);
  return report;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  switch (cfg.id) {
    case SuiteId::Algebra: return run_algebra_suite(cfg);
    case SuiteId::Pointwise: return run_pointwise_suite(cfg);
    case SuiteId::Comparison: return run_comparison_suite(cfg);
    case SuiteId::Inequality: return run_inequality_suite(cfg);
    case SuiteId::Asymptotic: return run_asymptotic_suite(cfg);
  }
  fail(ErrorKind::Argument, "unknown suite");
}

std::string report_csv_header() {
  return "suite,case,check,family,model,field,n,r,inputs,measured,expected,residual,tolerance,pass,"
         "note\n";
}

std::string report_csv_rows(const SuiteReport& report) {
  std::string out;
  const std::string suite = suite_name(report.id);
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const auto& c = report.cases[i];
    out += suite + ',' + std::to_string(i) + ',' + csv_field(c.check) + ',' + csv_field(c.family) +
           ',' + csv_field(c.model) + ',' + csv_field(c.field) + ',' + std::to_string(c.n) + ',' +
           std::to_string(c.r) + ',' + csv_field(c.inputs) + ',' + format_double(c.measured) + ',' +
           format_double(c.expected) + ',' + format_double(c.residual) + ',' +
           format_double(c.tolerance) + ',' + (c.pass ? "true" : "false") + ',' + csv_field(c.note) +
           '\n';
  }
  return out;
}

}  // namespace curvatura::verify
