#pragma once

// Deterministic quadrature over level sets of star-shaped fields and over the
// regions between two levels.
//
// A level set {u = c} is parameterized by rays x = z + rho(theta) theta from
// the field's star center z in the normal chart, with theta running over a
// Gauss-Legendre tensor grid in iterated spherical angles. The surface element
// follows from the coarea identity dV = dA dt / |grad u|:
//     dA = |grad u| sqrt(det g) rho^{n-1} J_S(theta) / (du/drho) dtheta.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "level_set_geometry.hpp"

namespace curvatura::quadrature {

using levelset::ScalarField;
using manifold::ChartPoint;
using manifold::ModelManifold;

struct QuadratureSpec {
  std::vector<int> angular_orders;  // one per angle, or a single entry for all
  int level_order = 16;
  double margin = 1e-6;  // polar-axis exclusion in radians

  static QuadratureSpec uniform(int angular_order, int level_order);
  int angular_order(int axis) const;
  /// Throws Argument unless all orders >= 2 and margin in (0, 1e-3].
  void validate(int dim) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |difference against the next-lower order| plus a roundoff floor
  std::int64_t node_count = 0;
  bool converged = true;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Cached Gauss-Legendre rule; Newton iteration on P_n from Chebyshev guesses.
const GaussRule& gauss_legendre(int order);

/// Point on a level set together with the quantities the surface element used.
struct SurfaceSample {
  ChartPoint point;
  double level = 0.0;
  double grad_norm = 0.0;  // |grad u|_g
};

/// Writes `out.size()` integrand components at the sample.
using SurfaceIntegrand = std::function<void(const SurfaceSample&, std::span<double>)>;

/// Root of u(z + rho * dir) = level along a ray: bracketing bisection to width
/// 1e-6 then Newton to 1e-12. Throws Geometry when u is not increasing across
/// the root or no crossing exists inside the working radius.
double find_level_radius(const ScalarField& u, const ModelManifold& m, const Vector& star_center,
                         const Vector& direction, double level, double guess);

/// Chart point about which every level set of u is star-shaped.
Vector star_center(const ScalarField& u);

std::vector<IntegralResult> surface_integral(const ScalarField& u, const ModelManifold& m,
                                             double level, int width,
                                             const SurfaceIntegrand& integrand,
                                             const QuadratureSpec& spec,
                                             bool estimate_error = true);

IntegralResult surface_integral(const ScalarField& u, const ModelManifold& m, double level,
                                const std::function<double(const SurfaceSample&)>& integrand,
                                const QuadratureSpec& spec);

/// Integral over {c1 < u < c2} as int_{c1}^{c2} (int_{u=t} phi/|grad u| dA) dt.
std::vector<IntegralResult> coarea_volume_integral(const ScalarField& u, const ModelManifold& m,
                                                   double c1, double c2, int width,
                                                   const SurfaceIntegrand& integrand,
                                                   const QuadratureSpec& spec);

IntegralResult coarea_volume_integral(const ScalarField& u, const ModelManifold& m, double c1,
                                      double c2,
                                      const std::function<double(const SurfaceSample&)>& integrand,
                                      const QuadratureSpec& spec);

/// Volume of {u < level} by integrating sqrt(det g) s^{n-1} along every ray.
IntegralResult star_volume(const ScalarField& u, const ModelManifold& m, double level,
                           const QuadratureSpec& spec);

/// Gauss-Legendre on [a, b], doubling the order from `order` until two
/// successive values differ by < 1e-12 (relative to max(1, |value|)); gives up
/// at order 4096 and reports converged = false.
IntegralResult radial_integral(const std::function<double(double)>& g, double a, double b,
                               int order = 8);

}  // namespace curvatura::quadrature
