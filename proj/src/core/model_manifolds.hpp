#pragma once

// Rotationally symmetric model spaces dr^2 + f(r)^2 g_{S^{n-1}}: Euclidean
// space (f = r), constant curvature a <= 0 (f = sinh(sqrt(-a) r)/sqrt(-a)) and
// general warped products with a user profile.
//
// Two charts are provided. `Cartesian` is the normal-coordinate chart about
// the pole, x = r * theta, in which
//     g_ij = phi(r) delta_ij + (1 - phi(r)) xhat_i xhat_j,   phi = (f/r)^2,
// and which is smooth everywhere. `GeodesicPolar` uses (r, theta_1..theta_{n-1})
// with iterated spherical angles and is singular at r = 0 and on the polar axis.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace curvatura::manifold {

using ScalarFn = std::function<double(double)>;

struct WarpingProfile {
  std::string name;
  ScalarFn f;
  ScalarFn df;
  ScalarFn ddf;
  // Closed forms of -f''/f and (1 - f'^2)/f^2 that stay regular at r = 0.
  // When empty the quotients are evaluated directly.
  ScalarFn radial_curvature_fn;
  ScalarFn tangential_curvature_fn;

  double radial_curvature(double r) const;
  double tangential_curvature(double r) const;

  static WarpingProfile linear();
  /// sinh(k r)/k with k = sqrt(-a); a = 0 gives the linear profile.
  static WarpingProfile hyperbolic(double a);
  /// f(r) = r + r^3/6
  static WarpingProfile poly3();
};

/// Throws Argument unless f(0) = 0, f'(0) = 1, f > 0 and both curvature
/// quotients are <= 0 on (0, radius], and f', f'' agree with central
/// differences of f, all checked on `samples` radii.
void validate_profile(const WarpingProfile& profile, double radius, int samples = 1000);

enum class Family { Euclidean, ConstantCurvature, WarpedProduct };
enum class Chart { Cartesian, GeodesicPolar };

class ModelManifold {
 public:
  static ModelManifold euclidean(int dim);
  static ModelManifold constant_curvature(double a, int dim);
  static ModelManifold warped(WarpingProfile profile, int dim, double working_radius = 10.0);

  Family family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  /// Curvature of the constant-curvature family; 0 for Euclidean space.
  double curvature() const noexcept { return a_; }
  const WarpingProfile& profile() const noexcept { return profile_; }
  double working_radius() const noexcept { return working_radius_; }
  /// Short identifier used in reports, e.g. "euclidean", "constant(-1)", "warped(poly3)".
  std::string label() const;

 private:
  ModelManifold(Family family, int dim, double a, WarpingProfile profile, double radius);

  Family family_;
  int dim_;
  double a_;
  WarpingProfile profile_;
  double working_radius_;
};

struct ChartPoint {
  Chart chart = Chart::Cartesian;
  Vector coords;
};

/// Geodesic distance to the pole.
double radius_of(const ChartPoint& p);
Vector polar_to_cartesian(const Vector& polar);
Vector cartesian_to_polar(const Vector& x);
/// Round-sphere direction theta(angles) in R^n for angles of length n-1.
Vector sphere_direction(std::span<const double> angles, int n);

Matrix metric_at(const ModelManifold& m, const ChartPoint& p);
Matrix inverse_metric_at(const ModelManifold& m, const ChartPoint& p);

struct Christoffel {
  int dim = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> values{};

  /// Gamma^k_{ij}
  double operator()(int k, int i, int j) const noexcept {
    return values[(k * kMaxDim + i) * kMaxDim + j];
  }
  double& operator()(int k, int i, int j) noexcept {
    return values[(k * kMaxDim + i) * kMaxDim + j];
  }
};

Christoffel christoffel_at(const ModelManifold& m, const ChartPoint& p);

// Riemann tensor R_abcd in some orthonormal frame, with the convention that
// R_abab is the sectional curvature of span(E_a, E_b).
class RiemannTensor {
 public:
  RiemannTensor() = default;
  explicit RiemannTensor(int n) : n_(n), r_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

  int dim() const noexcept { return n_; }
  double operator()(int a, int b, int c, int d) const noexcept { return r_[index(a, b, c, d)]; }
  double& operator()(int a, int b, int c, int d) noexcept { return r_[index(a, b, c, d)]; }

 private:
  std::size_t index(int a, int b, int c, int d) const noexcept {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }
  int n_ = 0;
  std::vector<double> r_;
};

// Pointwise curvature of a model space: everything needed to produce R in any
// orthonormal frame from the frame components of the radial unit vector.
struct PointCurvature {
  int dim = 0;
  double tangential = 0.0;  // (1 - f'^2)/f^2, sectional curvature of planes normal to d/dr
  double radial = 0.0;      // -f''/f, sectional curvature of planes containing d/dr
  bool isotropic = true;    // radial == tangential exactly (Euclidean, constant curvature)
  Vector radial_chart;      // chart components of d/dr, zero at the pole
};

PointCurvature point_curvature(const ModelManifold& m, const ChartPoint& p);
/// R in an orthonormal frame where d/dr has components `radial_frame`.
RiemannTensor riemann_in_frame(const PointCurvature& c, const Vector& radial_frame);

struct CurvatureTensorData {
  std::vector<Vector> frame;  // chart components of E_1..E_n
  RiemannTensor riemann;
  Matrix sectional;  // K_ij = R_ijij
  double ricci_n = 0.0;  // Ric(E_n) = sum_{i<n} K_in
};

/// Throws Argument when the frame's Gram matrix deviates from I by more than 1e-8.
CurvatureTensorData riemann_at(const ModelManifold& m, const ChartPoint& p,
                               const std::vector<Vector>& frame);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
double unit_sphere_volume(int n);

struct SphereData {
  double principal_curvature;  // f'/f
  double volume_factor;        // f^{n-1}
};

/// Geodesic sphere of radius rho about the pole.
SphereData sphere_data(const ModelManifold& m, double rho);
/// C(n-1,r) |S^{n-1}| f^{n-1-r} f'^r
double sphere_total_mean_curvature(const ModelManifold& m, int r, double rho);

}  // namespace curvatura::manifold
