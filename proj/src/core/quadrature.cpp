#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace curvatura::quadrature {

using levelset::FieldKind;
using manifold::Chart;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct AngularGrid {
  std::vector<Vector> directions;
  std::vector<double> weights;  // include the round-sphere Jacobian
};

AngularGrid angular_grid(int n, const std::vector<int>& orders, double margin) {
  // Per-axis nodes and weights; axis l < n-2 is a polar angle carrying
  // sin^{n-2-l}, the last axis is the azimuth on [0, 2 pi].
  std::vector<std::vector<double>> nodes(n - 1);
  std::vector<std::vector<double>> weights(n - 1);
  for (int l = 0; l < n - 1; ++l) {
    const GaussRule& rule = gauss_legendre(orders[l]);
    const bool azimuth = l == n - 2;
    const double lo = azimuth ? 0.0 : margin;
    const double hi = azimuth ? 2.0 * std::numbers::pi : std::numbers::pi - margin;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double theta = mid + half * rule.nodes[k];
      const double jac = azimuth ? 1.0 : std::pow(std::sin(theta), n - 2 - l);
      nodes[l].push_back(theta);
      weights[l].push_back(half * rule.weights[k] * jac);
    }
  }

  AngularGrid grid;
  std::vector<std::size_t> index(n - 1, 0);
  std::vector<double> angles(n - 1);
  while (true) {
    double w = 1.0;
    for (int l = 0; l < n - 1; ++l) {
      angles[l] = nodes[l][index[l]];
      w *= weights[l][index[l]];
    }
    grid.directions.push_back(manifold::sphere_direction(angles, n));
    grid.weights.push_back(w);
    int axis = n - 2;
    while (axis >= 0 && ++index[axis] == nodes[axis].size()) index[axis--] = 0;
    if (axis < 0) break;
  }
  return grid;
}

std::vector<int> orders_for(const QuadratureSpec& spec, int n, int shift) {
  std::vector<int> orders(n - 1);
  for (int l = 0; l < n - 1; ++l) orders[l] = std::max(1, spec.angular_order(l) - shift);
  return orders;
}

double roundoff_floor(double abs_sum, std::size_t nodes) {
  return 16.0 * kEps * abs_sum * std::log2(static_cast<double>(nodes) + 2.0);
}

// Fraction of the round sphere's measure lost to the polar margins.
double cap_fraction(int n, double margin) {
  double lost = 0.0;
  for (int l = 0; l < n - 2; ++l) {
    const double k = n - 2 - l;
    const double full = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (k + 1)) /
                        std::tgamma(0.5 * k + 1.0);
    lost += 2.0 * std::pow(margin, k + 1) / (k + 1) / full;
  }
  return lost;
}

struct SurfacePass {
  std::vector<double> values;
  std::vector<double> abs_sums;
  std::int64_t nodes = 0;
};

SurfacePass surface_pass(const ScalarField& u, const ModelManifold& m, double level, int width,
                         const SurfaceIntegrand& integrand, const std::vector<int>& orders,
                         double margin) {
  const int n = m.dim();
  const AngularGrid grid = angular_grid(n, orders, margin);
  const std::size_t count = grid.directions.size();
  const Vector z = star_center(u);
  std::vector<double> buffer(count * static_cast<std::size_t>(width), 0.0);

  parallel_for(count, [&](std::size_t i) {
    const Vector& dir = grid.directions[i];
    const double rho = find_level_radius(u, m, z, dir, level, 1.0);
    SurfaceSample sample;
    sample.point = ChartPoint{Chart::Cartesian, z + rho * dir};
    sample.level = level;
    const auto jet = u.analytic_jet(sample.point);
    const Matrix g = manifold::metric_at(m, sample.point);
    const Matrix ginv = manifold::inverse_metric_at(m, sample.point);
    sample.grad_norm = std::sqrt(dot(jet->grad, ginv * jet->grad));
    if (!(sample.grad_norm > levelset::kDefaultGradientCutoff)) {
      std::ostringstream msg;
      msg << "degenerate gradient on level " << level << " at chart point (";
      for (int k = 0; k < n; ++k) msg << (k ? ", " : "") << sample.point.coords[k];
      msg << ")";
      fail(ErrorKind::DegenerateGradient, msg.str());
    }
    const double drho = dot(jet->grad, dir);
    const double area = grid.weights[i] * sample.grad_norm * std::sqrt(determinant(g)) *
                        std::pow(rho, n - 1) / drho;
    std::array<double, 16> out{};
    integrand(sample, std::span<double>(out.data(), static_cast<std::size_t>(width)));
    for (int w = 0; w < width; ++w) buffer[static_cast<std::size_t>(w) * count + i] = area * out[w];
  });

  SurfacePass pass;
  pass.nodes = static_cast<std::int64_t>(count);
  for (int w = 0; w < width; ++w) {
    const std::span<const double> column(buffer.data() + static_cast<std::size_t>(w) * count, count);
    pass.values.push_back(pairwise_sum(column));
    double abs_sum = 0.0;
    for (double v : column) abs_sum += std::abs(v);
    pass.abs_sums.push_back(abs_sum);
  }
  return pass;
}

}  // namespace

QuadratureSpec QuadratureSpec::uniform(int angular_order, int level_order) {
  QuadratureSpec spec;
  spec.angular_orders = {angular_order};
  spec.level_order = level_order;
  return spec;
}

int QuadratureSpec::angular_order(int axis) const {
  if (angular_orders.empty()) return 16;
  if (angular_orders.size() == 1) return angular_orders.front();
  return angular_orders.at(static_cast<std::size_t>(axis));
}

void QuadratureSpec::validate(int dim) const {
  require(angular_orders.size() <= 1 || static_cast<int>(angular_orders.size()) == dim - 1,
          ErrorKind::Argument, "angular_orders must have one entry or n-1 entries");
  for (int l = 0; l < dim - 1; ++l)
    require(angular_order(l) >= 2, ErrorKind::Argument, "angular orders must be >= 2");
  require(level_order >= 2, ErrorKind::Argument, "level order must be >= 2");
  require(margin > 0.0 && margin <= 1e-3, ErrorKind::Argument, "margin must be in (0, 1e-3]");
}

const GaussRule& gauss_legendre(int order) {
  require(order >= 1 && order <= 8192, ErrorKind::Argument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  const int n = order;
  rule->nodes.assign(n, 0.0);
  rule->weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule->nodes[i] = -z;
    rule->nodes[n - 1 - i] = z;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

Vector star_center(const ScalarField& u) {
  switch (u.kind()) {
    case FieldKind::QuadraticForm:
      return Vector(u.dim());
    default:
      return u.center();
  }
}

double find_level_radius(const ScalarField& u, const ModelManifold& m, const Vector& z,
                         const Vector& dir, double level, double guess) {
  const double limit = m.working_radius();
  auto residual = [&](double rho) {
    return u.value(ChartPoint{Chart::Cartesian, z + rho * dir}) - level;
  };
  auto inside = [&](double rho) { return norm(z + rho * dir) <= limit; };

  if (!(residual(0.0) < 0.0))
    fail(ErrorKind::Geometry, "level lies at or below the field value at its star center");

  double lo = 0.0;
  double hi = std::max(guess, 1e-3);
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!inside(hi)) {
      // Last chance: the crossing may sit between lo and the boundary itself.
      double boundary = hi;
      for (int k = 0; k < 200 && !inside(boundary); ++k) boundary = 0.5 * (lo + boundary);
      if (inside(boundary) && residual(boundary) >= 0.0) {
        hi = boundary;
        break;
      }
      fail(ErrorKind::Geometry, "level set leaves the working radius along a ray");
    }
  }

  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }

  double rho = 0.5 * (lo + hi);
  for (int iter = 0; iter < 60; ++iter) {
    const ChartPoint p{Chart::Cartesian, z + rho * dir};
    const auto jet = u.analytic_jet(p);
    const double slope = dot(jet->grad, dir);
    if (!(slope > 0.0))
      fail(ErrorKind::Geometry, "field is not increasing along a ray from its star center");
    const double step = (jet->value - level) / slope;
    const double next = rho - step;
    if (next < lo - 1e-6 || next > hi + 1e-6)
      fail(ErrorKind::Geometry, "Newton step left the bracket; field not monotone along ray");
    rho = next;
    if (std::abs(step) <= 1e-12 * std::max(1.0, rho)) break;
  }
  const double slope = dot(u.analytic_jet(ChartPoint{Chart::Cartesian, z + rho * dir})->grad, dir);
  if (!(slope > 0.0))
    fail(ErrorKind::Geometry, "field is not increasing across the level set");
  return rho;
}

std::vector<IntegralResult> surface_integral(const ScalarField& u, const ModelManifold& m,
                                             double level, int width,
                                             const SurfaceIntegrand& integrand,
                                             const QuadratureSpec& spec, bool estimate_error) {
  const int n = m.dim();
  spec.validate(n);
  u.check_compatible(m);
  require(width >= 1 && width <= 16, ErrorKind::Argument, "integrand width must be in [1, 16]");

  const SurfacePass fine = surface_pass(u, m, level, width, integrand, orders_for(spec, n, 0),
                                        spec.margin);
  std::vector<IntegralResult> out(static_cast<std::size_t>(width));
  for (int w = 0; w < width; ++w) {
    out[w].value = fine.values[w];
    out[w].node_count = fine.nodes;
    out[w].error_estimate = roundoff_floor(fine.abs_sums[w], static_cast<std::size_t>(fine.nodes)) +
                            2.0 * cap_fraction(n, spec.margin) * fine.abs_sums[w];
  }
  if (estimate_error) {
    const SurfacePass coarse = surface_pass(u, m, level, width, integrand,
                                            orders_for(spec, n, 1), spec.margin);
    for (int w = 0; w < width; ++w) {
      out[w].error_estimate += std::abs(fine.values[w] - coarse.values[w]);
      out[w].node_count += coarse.nodes;
    }
  }
  return out;
}

IntegralResult surface_integral(const ScalarField& u, const ModelManifold& m, double level,
                                const std::function<double(const SurfaceSample&)>& integrand,
                                const QuadratureSpec& spec) {
  return surface_integral(
      u, m, level, 1,
      [&](const SurfaceSample& s, std::span<double> out) { out[0] = integrand(s); }, spec)[0];
}

std::vector<IntegralResult> coarea_volume_integral(const ScalarField& u, const ModelManifold& m,
                                                   double c1, double c2, int width,
                                                   const SurfaceIntegrand& integrand,
                                                   const QuadratureSpec& spec) {
  require(c1 < c2, ErrorKind::Argument, "coarea integral needs c1 < c2");
  spec.validate(m.dim());
  const SurfaceIntegrand weighted = [&](const SurfaceSample& s, std::span<double> out) {
    integrand(s, out);
    for (double& v : out) v /= s.grad_norm;
  };

  const double half = 0.5 * (c2 - c1);
  const double mid = 0.5 * (c2 + c1);
  auto level_rule = [&](int order, bool with_angular_error) {
    const GaussRule& rule = gauss_legendre(order);
    std::vector<std::vector<double>> terms(static_cast<std::size_t>(width));
    std::vector<double> angular_error(static_cast<std::size_t>(width), 0.0);
    std::int64_t nodes = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = mid + half * rule.nodes[k];
      const double wt = half * rule.weights[k];
      const auto inner = surface_integral(u, m, t, width, weighted, spec, with_angular_error);
      for (int w = 0; w < width; ++w) {
        terms[w].push_back(wt * inner[w].value);
        angular_error[w] += wt * inner[w].error_estimate;
      }
      nodes += inner[0].node_count;
    }
    std::vector<IntegralResult> out(static_cast<std::size_t>(width));
    for (int w = 0; w < width; ++w) {
      out[w].value = pairwise_sum(terms[w]);
      out[w].error_estimate = angular_error[w];
      out[w].node_count = nodes;
    }
    return out;
  };

  auto fine = level_rule(spec.level_order, true);
  const auto coarse = level_rule(spec.level_order - 1, false);
  for (int w = 0; w < width; ++w) {
    fine[w].error_estimate += std::abs(fine[w].value - coarse[w].value);
    fine[w].node_count += coarse[w].node_count;
  }
  return fine;
}

IntegralResult coarea_volume_integral(const ScalarField& u, const ModelManifold& m, double c1,
                                      double c2,
                                      const std::function<double(const SurfaceSample&)>& integrand,
                                      const QuadratureSpec& spec) {
  return coarea_volume_integral(
      u, m, c1, c2, 1,
      [&](const SurfaceSample& s, std::span<double> out) { out[0] = integrand(s); }, spec)[0];
}

IntegralResult star_volume(const ScalarField& u, const ModelManifold& m, double level,
                           const QuadratureSpec& spec) {
  const int n = m.dim();
  spec.validate(n);
  u.check_compatible(m);
  const Vector z = star_center(u);

  // values[0]: (k, m), values[1]: (k, m-1)
  auto pass = [&](const std::vector<int>& orders, std::array<double, 2>& values,
                  std::int64_t& nodes) {
    const AngularGrid grid = angular_grid(n, orders, spec.margin);
    const std::size_t count = grid.directions.size();
    std::vector<double> fine(count), coarse(count);
    parallel_for(count, [&](std::size_t i) {
      const Vector& dir = grid.directions[i];
      const double rho = find_level_radius(u, m, z, dir, level, 1.0);
      std::array<double, 2> radial{};
      for (int which = 0; which < 2; ++which) {
        const GaussRule& rule = gauss_legendre(spec.level_order - which);
        std::vector<double> terms;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double s = 0.5 * rho * (1.0 + rule.nodes[k]);
          const ChartPoint p{Chart::Cartesian, z + s * dir};
          terms.push_back(0.5 * rho * rule.weights[k] *
                          std::sqrt(determinant(manifold::metric_at(m, p))) * std::pow(s, n - 1));
        }
        radial[which] = pairwise_sum(terms);
      }
      fine[i] = grid.weights[i] * radial[0];
      coarse[i] = grid.weights[i] * radial[1];
    });
    values = {pairwise_sum(fine), pairwise_sum(coarse)};
    nodes += static_cast<std::int64_t>(count) * (2 * spec.level_order - 1);
    double abs_sum = 0.0;
    for (double v : fine) abs_sum += std::abs(v);
    return roundoff_floor(abs_sum, count) + 2.0 * cap_fraction(n, spec.margin) * abs_sum;
  };

  IntegralResult out;
  std::array<double, 2> fine{}, coarse{};
  const double floor = pass(orders_for(spec, n, 0), fine, out.node_count);
  pass(orders_for(spec, n, 1), coarse, out.node_count);
  out.value = fine[0];
  out.error_estimate = floor + std::abs(fine[0] - fine[1]) + std::abs(fine[0] - coarse[0]);
  return out;
}

IntegralResult radial_integral(const std::function<double(double)>& g, double a, double b,
                               int order) {
  require(std::isfinite(a) && std::isfinite(b), ErrorKind::Argument, "bounds must be finite");
  auto apply = [&](int k) {
    const GaussRule& rule = gauss_legendre(k);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      terms[i] = half * rule.weights[i] * g(mid + half * rule.nodes[i]);
    return pairwise_sum(terms);
  };
  IntegralResult out;
  int k = std::max(order, 2);
  double previous = apply(k);
  out.node_count = k;
  while (true) {
    const int next_order = 2 * k;
    if (next_order > 4096) {
      out.value = previous;
      out.converged = false;
      return out;
    }
    const double next = apply(next_order);
    out.node_count += next_order;
    const double diff = std::abs(next - previous);
    if (diff < 1e-12 * std::max(1.0, std::abs(next))) {
      out.value = next;
      out.error_estimate = diff;
      return out;
    }
    previous = next;
    k = next_order;
  }
}

}  // namespace curvatura::quadrature
