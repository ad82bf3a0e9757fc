#include "curvature_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "errors.hpp"
#include "symmetric_algebra.hpp"

namespace curvatura::integrals {

using levelset::FieldKind;
using manifold::ChartPoint;
using manifold::Family;
using quadrature::SurfaceSample;

namespace {

constexpr double kBudgetFactor = 10.0;

bool radial_kind(const ScalarField& u) {
  return u.kind() == FieldKind::RadialDistance ||
         u.kind() == FieldKind::RadialDistanceSquaredHalf;
}

double radius_for_level(const ScalarField& u, double level) {
  return u.kind() == FieldKind::RadialDistance ? level : std::sqrt(2.0 * level);
}

std::string describe(const ScalarField& u, const ModelManifold& m, double level) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << m.label() << "/n=" << m.dim() << "/" << u.label() << "/level=" << level;
  return out.str();
}

double product_of(const Vector& kappa, const std::vector<int>& indices) {
  double p = 1.0;
  for (int i : indices) p *= kappa[i];
  return p;
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Volume of {u < level} for radial fields: |S^{n-1}| int_0^rho f^{n-1}.
quadrature::IntegralResult radial_volume(const ModelManifold& m, double rho) {
  const int n = m.dim();
  const auto& f = m.profile().f;
  auto result = quadrature::radial_integral(
      [&](double t) { return std::pow(f(t), n - 1); }, 0.0, rho, 16);
  const double sphere = manifold::unit_sphere_volume(n);
  result.value *= sphere;
  result.error_estimate *= sphere;
  return result;
}

}  // namespace

double ComparisonBreakdown::scale() const {
  return std::max({std::abs(lhs),
                   std::abs(term_principal) + std::abs(term_sectional) + std::abs(term_mixed),
                   std::abs(outer_value)});
}

double ComparisonBreakdown::relative_residual() const {
  const double s = scale();
  return s > 0.0 ? std::abs(residual) / s : std::abs(residual);
}

MeanCurvatureReport total_mean_curvature(const ScalarField& u, const ModelManifold& m,
                                         double level, int r, const QuadratureSpec& spec) {
  const int n = m.dim();
  require(r >= -1 && r <= n - 1, ErrorKind::Argument, "need -1 <= r <= n-1");
  u.check_compatible(m);

  MeanCurvatureReport out;
  out.r = r;
  out.descriptor = describe(u, m, level);
  if (r == -1) {
    const auto vol = radial_kind(u) ? radial_volume(m, radius_for_level(u, level))
                                    : quadrature::star_volume(u, m, level, spec);
    out.value = vol.value;
    out.error_estimate = vol.error_estimate;
    out.node_count = vol.node_count;
    return out;
  }
  const auto result = quadrature::surface_integral(
      u, m, level,
      [&](const SurfaceSample& s) {
        const auto pf = levelset::principal_frame(levelset::hessian_frame(u, m, s.point));
        return algebra::sigma_elementary(pf.kappa.span(), r);
      },
      spec);
  out.value = result.value;
  out.error_estimate = result.error_estimate;
  out.node_count = result.node_count;
  return out;
}

const CorrectionIndexSets& correction_index_sets(int n, int r) {
  require(n >= 2 && n <= 6 && r >= 0 && r <= n - 1, ErrorKind::Argument,
          "index sets need 2 <= n <= 6 and 0 <= r <= n-1");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<CorrectionIndexSets>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, r}];
  if (slot) return *slot;

  auto sets = std::make_unique<CorrectionIndexSets>();
  const int dirs = n - 1;
  if (r >= 1) {
    for_each_subset(dirs, r - 1, [&](const std::vector<int>& asc) {
      for (int last = 0; last < dirs; ++last)
        if (!contains(asc, last)) sets->first.push_back({asc, last});
    });
  }
  if (r >= 2) {
    for_each_subset(dirs, r - 2, [&](const std::vector<int>& asc) {
      for (int pivot = 0; pivot < dirs; ++pivot) {
        if (contains(asc, pivot)) continue;
        for (int last = 0; last < dirs; ++last)
          if (last != pivot && !contains(asc, last)) sets->second.push_back({asc, pivot, last});
      }
    });
  }
  slot = std::move(sets);
  return *slot;
}

std::array<double, 4> comparison_integrand(const ScalarField& u, const ModelManifold& m,
                                           const ChartPoint& p, int r) {
  const int n = m.dim();
  const auto h = levelset::hessian_frame(u, m, p);
  const auto pf = levelset::principal_frame(h);
  const auto pc = manifold::point_curvature(m, p);
  const auto riemann = manifold::riemann_in_frame(pc, levelset::radial_in_principal_frame(h, pf, pc));
  const int nn = n - 1;

  std::array<double, 4> out{};
  out[0] = (r + 1) * algebra::sigma_elementary(pf.kappa.span(), r + 1);

  const auto& sets = correction_index_sets(n, r);
  double sectional = 0.0;
  for (const auto& t : sets.first)
    sectional -= product_of(pf.kappa, t.ascending) * riemann(t.last, nn, t.last, nn);
  double mixed = 0.0;
  for (const auto& t : sets.second)
    mixed += product_of(pf.kappa, t.ascending) * pf.grad_norm_derivs[t.pivot] *
             riemann(t.last, t.pivot, t.last, nn);
  mixed /= pf.grad_norm;
  out[1] = sectional;
  out[2] = mixed;

  if (r >= 1) {
    const auto full_riemann = manifold::riemann_in_frame(pc, h.frame_inverse * pc.radial_chart);
    const Vector div = levelset::div_newton_contracted(h, full_riemann, r);
    const double contracted = dot(div, h.grad_frame) / std::pow(h.grad_norm, r + 1);
    out[3] = std::abs(contracted - sectional - mixed);
  }
  return out;
}

namespace {

void fill_lhs(ComparisonBreakdown& b, const ScalarField& u, const ModelManifold& m, double c1,
              double c2, int r, const QuadratureSpec& spec, double& error_sum) {
  const auto inner = total_mean_curvature(u, m, c1, r, spec);
  const auto outer = total_mean_curvature(u, m, c2, r, spec);
  b.lhs = outer.value - inner.value;
  b.outer_value = outer.value;
  b.node_count += inner.node_count + outer.node_count;
  error_sum += inner.error_estimate + outer.error_estimate;
}

void finish(ComparisonBreakdown& b, double error_sum) {
  b.residual = b.lhs - b.rhs();
  b.error_budget = kBudgetFactor * error_sum;
}

void check_levels(double c1, double c2) {
  require(c1 < c2, ErrorKind::Argument, "comparison needs c1 < c2");
}

}  // namespace

ComparisonBreakdown comparison_rhs(const ScalarField& u, const ModelManifold& m, double c1,
                                   double c2, int r, const QuadratureSpec& spec) {
  const int n = m.dim();
  require(r >= 0 && r <= n - 1, ErrorKind::Argument, "need 0 <= r <= n-1");
  check_levels(c1, c2);
  ComparisonBreakdown b;
  double error_sum = 0.0;
  fill_lhs(b, u, m, c1, c2, r, spec, error_sum);

  const auto terms = quadrature::coarea_volume_integral(
      u, m, c1, c2, 4,
      [&](const SurfaceSample& s, std::span<double> out) {
        const auto v = comparison_integrand(u, m, s.point, r);
        std::copy(v.begin(), v.end(), out.begin());
      },
      spec);
  b.term_principal = terms[0].value;
  b.term_sectional = terms[1].value;
  b.term_mixed = terms[2].value;
  b.contraction_gap = terms[3].value;
  b.node_count += terms[0].node_count;
  for (int k = 0; k < 3; ++k) error_sum += terms[k].error_estimate;
  finish(b, error_sum);
  return b;
}

ComparisonBreakdown comparison_rhs_constant(const ScalarField& u, const ModelManifold& m,
                                            double c1, double c2, int r,
                                            const QuadratureSpec& spec) {
  const int n = m.dim();
  require(m.family() != Family::WarpedProduct, ErrorKind::Argument,
          "two-term comparison needs a constant-curvature model");
  require(r >= 0 && r <= n - 1, ErrorKind::Argument, "need 0 <= r <= n-1");
  check_levels(c1, c2);
  const double a = m.curvature();
  ComparisonBreakdown b;
  double error_sum = 0.0;
  fill_lhs(b, u, m, c1, c2, r, spec, error_sum);

  const auto terms = quadrature::coarea_volume_integral(
      u, m, c1, c2, 2,
      [&](const SurfaceSample& s, std::span<double> out) {
        const auto pf = levelset::principal_frame(levelset::hessian_frame(u, m, s.point));
        out[0] = (r + 1) * algebra::sigma_elementary(pf.kappa.span(), r + 1);
        out[1] = r >= 1 ? -a * (n - r) * algebra::sigma_elementary(pf.kappa.span(), r - 1) : 0.0;
      },
      spec);
  b.term_principal = terms[0].value;
  b.term_sectional = terms[1].value;
  b.node_count += terms[0].node_count;
  error_sum += terms[0].error_estimate + terms[1].error_estimate;
  finish(b, error_sum);
  return b;
}

ComparisonBreakdown ricci_comparison(const ScalarField& u, const ModelManifold& m, double c1,
                                     double c2, const QuadratureSpec& spec) {
  const int n = m.dim();
  check_levels(c1, c2);
  ComparisonBreakdown b;
  double error_sum = 0.0;
  fill_lhs(b, u, m, c1, c2, 1, spec, error_sum);

  const auto terms = quadrature::coarea_volume_integral(
      u, m, c1, c2, 2,
      [&](const SurfaceSample& s, std::span<double> out) {
        const auto h = levelset::hessian_frame(u, m, s.point);
        const auto pf = levelset::principal_frame(h);
        std::vector<Vector> frame;
        for (int i = 0; i < n; ++i) frame.push_back(levelset::frame_to_chart(h, pf.basis.column(i)));
        const auto curv = manifold::riemann_at(m, s.point, frame);
        out[0] = 2.0 * algebra::sigma_elementary(pf.kappa.span(), 2);
        out[1] = -curv.ricci_n;
      },
      spec);
  b.term_principal = terms[0].value;
  b.term_sectional = terms[1].value;
  b.node_count += terms[0].node_count;
  error_sum += terms[0].error_estimate + terms[1].error_estimate;
  finish(b, error_sum);
  return b;
}

double solanes_prediction(const std::map<int, double>& lower, double a, int n) {
  require(n >= 2, ErrorKind::Argument, "dimension must be >= 2");
  double value = manifold::unit_sphere_volume(n);
  for (int i = 1; i <= n / 2; ++i) {
    const int j = n - 2 * i - 1;
    const auto it = lower.find(j);
    if (it == lower.end()) {
      std::ostringstream msg;
      msg << "missing M_" << j << " for the dimension " << n << " prediction";
      fail(ErrorKind::Argument, msg.str());
    }
    const double coeff = static_cast<double>(algebra::double_factorial(2 * i - 1)) *
                         static_cast<double>(algebra::double_factorial(n - 2 * i - 2)) /
                         static_cast<double>(algebra::double_factorial(n - 2));
    value -= coeff * std::pow(a, i) * it->second;
  }
  return value;
}

double ball_bound(int r, double rho, double a, int n) {
  require(a <= 0.0 && rho > 0.0, ErrorKind::Argument, "ball bound needs a <= 0 and rho > 0");
  require(r >= 0 && r <= n - 1, ErrorKind::Argument, "need 0 <= r <= n-1");
  double f = rho;
  double df = 1.0;
  if (a < 0.0) {
    const double k = std::sqrt(-a);
    f = std::sinh(k * rho) / k;
    df = std::cosh(k * rho);
  }
  return static_cast<double>(algebra::binomial(n - 1, r)) * manifold::unit_sphere_volume(n) *
         std::pow(f, n - 1 - r) * std::pow(df, r);
}

VolumeBound m1_volume_bound(double a, double vol, int n) {
  require(vol >= 0.0, ErrorKind::Argument, "volume must be nonnegative");
  VolumeBound out;
  out.general = -(n - 1) * a * vol;
  if (n == 3) out.dim3 = -4.0 * a * vol;
  return out;
}

}  // namespace curvatura::integrals
