#include "model_manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "symmetric_algebra.hpp"

namespace curvatura::manifold {

namespace {

constexpr double kPoleRadius = 1e-12;

struct NormalChartTerms {
  double phi = 1.0;   // (f/r)^2
  double dphi = 0.0;  // d phi / dr
  double psi = 0.0;   // (1 - phi)/r^2
  double dpsi = 0.0;  // d psi / dr
};

NormalChartTerms normal_chart_terms(const WarpingProfile& p, double r) {
  NormalChartTerms t;
  if (r < kPoleRadius) return t;
  const double q = p.f(r) / r;
  t.phi = q * q;
  t.dphi = 2.0 * q * (p.df(r) * r - p.f(r)) / (r * r);
  t.psi = (1.0 - t.phi) / (r * r);
  t.dpsi = -t.dphi / (r * r) - 2.0 * (1.0 - t.phi) / (r * r * r);
  return t;
}

void check_polar(const ModelManifold& m, const Vector& q) {
  require(q.size() == m.dim(), ErrorKind::Argument, "chart point has wrong dimension");
  if (q[0] <= 0.0) fail(ErrorKind::SingularChart, "geodesic polar chart is singular at r = 0");
  const int n = m.dim();
  for (int l = 1; l <= n - 2; ++l) {
    require(q[l] >= 0.0 && q[l] <= std::numbers::pi, ErrorKind::Argument,
            "polar angle outside [0, pi]");
    if (std::sin(q[l]) == 0.0)
      fail(ErrorKind::SingularChart, "geodesic polar chart is singular on the polar axis");
  }
}

// Diagonal entries h_m of the polar metric and their partial derivatives.
struct PolarMetric {
  Vector h;
  Matrix dh;  // dh(m, l) = d h_m / d q_l
};

PolarMetric polar_metric(const ModelManifold& m, const Vector& q) {
  const int n = m.dim();
  const double r = q[0];
  const double f = m.profile().f(r);
  const double df = m.profile().df(r);
  PolarMetric pm{Vector(n), Matrix(n)};
  pm.h[0] = 1.0;
  double angular = 1.0;  // prod_{l<k} sin^2 theta_l
  for (int k = 1; k < n; ++k) {
    pm.h[k] = f * f * angular;
    pm.dh(k, 0) = 2.0 * f * df * angular;
    for (int l = 1; l < k; ++l) pm.dh(k, l) = pm.h[k] * 2.0 / std::tan(q[l]);
    angular *= std::sin(q[k]) * std::sin(q[k]);
  }
  return pm;
}

}  // namespace

double WarpingProfile::radial_curvature(double r) const {
  if (radial_curvature_fn) return radial_curvature_fn(r);
  r = std::max(r, 1e-6);
  return -ddf(r) / f(r);
}

double WarpingProfile::tangential_curvature(double r) const {
  if (tangential_curvature_fn) return tangential_curvature_fn(r);
  r = std::max(r, 1e-6);
  const double d = df(r);
  const double v = f(r);
  return (1.0 - d * d) / (v * v);
}

WarpingProfile WarpingProfile::linear() {
  WarpingProfile p;
  p.name = "linear";
  p.f = [](double r) { return r; };
  p.df = [](double) { return 1.0; };
  p.ddf = [](double) { return 0.0; };
  p.radial_curvature_fn = [](double) { return 0.0; };
  p.tangential_curvature_fn = [](double) { return 0.0; };
  return p;
}

WarpingProfile WarpingProfile::hyperbolic(double a) {
  require(a <= 0.0, ErrorKind::Argument, "curvature must be nonpositive");
  if (a == 0.0) return linear();
  const double k = std::sqrt(-a);
  WarpingProfile p;
  p.name = "sinh";
  p.f = [k](double r) { return std::sinh(k * r) / k; };
  p.df = [k](double r) { return std::cosh(k * r); };
  p.ddf = [k](double r) { return k * std::sinh(k * r); };
  p.radial_curvature_fn = [a](double) { return a; };
  p.tangential_curvature_fn = [a](double) { return a; };
  return p;
}

WarpingProfile WarpingProfile::poly3() {
  WarpingProfile p;
  p.name = "poly3";
  p.f = [](double r) { return r + r * r * r / 6.0; };
  p.df = [](double r) { return 1.0 + 0.5 * r * r; };
  p.ddf = [](double r) { return r; };
  p.radial_curvature_fn = [](double r) { return -6.0 / (6.0 + r * r); };
  p.tangential_curvature_fn = [](double r) {
    const double s = 1.0 + r * r / 6.0;
    return -(1.0 + 0.25 * r * r) / (s * s);
  };
  return p;
}

void validate_profile(const WarpingProfile& p, double radius, int samples) {
  require(p.f && p.df && p.ddf, ErrorKind::Argument, "warping profile is incomplete");
  require(std::abs(p.f(0.0)) < 1e-12, ErrorKind::Argument, "warping profile needs f(0) = 0");
  require(std::abs(p.df(0.0) - 1.0) < 1e-12, ErrorKind::Argument,
          "warping profile needs f'(0) = 1");
  for (int s = 1; s <= samples; ++s) {
    const double r = radius * s / samples;
    std::ostringstream where;
    where << " (profile " << p.name << " at r = " << r << ")";
    require(p.f(r) > 0.0, ErrorKind::Argument, ("warping profile needs f > 0" + where.str()).c_str());
    const double kr = p.radial_curvature(r);
    const double kt = p.tangential_curvature(r);
    const double tol = 1e-12 * (1.0 + std::abs(kr) + std::abs(kt));
    if (kr > tol || kt > tol)
      fail(ErrorKind::Argument, "warping profile has positive curvature" + where.str());

    const double h = 1e-4 * (1.0 + r);
    const double fd1 = (p.f(r + h) - p.f(r - h)) / (2.0 * h);
    const double fd2 = (p.f(r + h) - 2.0 * p.f(r) + p.f(r - h)) / (h * h);
    const double scale = std::abs(p.f(r)) + std::abs(p.df(r)) + std::abs(p.ddf(r)) + 1.0;
    if (std::abs(fd1 - p.df(r)) > 1e-6 * scale)
      fail(ErrorKind::Argument, "f' disagrees with finite differences of f" + where.str());
    if (std::abs(fd2 - p.ddf(r)) > 1e-4 * scale)
      fail(ErrorKind::Argument, "f'' disagrees with finite differences of f" + where.str());
  }
}

ModelManifold::ModelManifold(Family family, int dim, double a, WarpingProfile profile,
                             double radius)
    : family_(family), dim_(dim), a_(a), profile_(std::move(profile)), working_radius_(radius) {
  require(dim >= 2 && dim <= 6, ErrorKind::Argument, "manifold dimension must be in [2, 6]");
  require(radius > 0.0, ErrorKind::Argument, "working radius must be positive");
}

ModelManifold ModelManifold::euclidean(int dim) {
  return ModelManifold(Family::Euclidean, dim, 0.0, WarpingProfile::linear(), 10.0);
}

ModelManifold ModelManifold::constant_curvature(double a, int dim) {
  require(a <= 0.0, ErrorKind::Argument, "constant curvature family requires a <= 0");
  return ModelManifold(Family::ConstantCurvature, dim, a, WarpingProfile::hyperbolic(a), 10.0);
}

ModelManifold ModelManifold::warped(WarpingProfile profile, int dim, double working_radius) {
  validate_profile(profile, working_radius);
  return ModelManifold(Family::WarpedProduct, dim, 0.0, std::move(profile), working_radius);
}

std::string ModelManifold::label() const {
  std::ostringstream s;
  switch (family_) {
    case Family::Euclidean: s << "euclidean"; break;
    case Family::ConstantCurvature: s << "constant(" << a_ << ")"; break;
    case Family::WarpedProduct: s << "warped(" << profile_.name << ")"; break;
  }
  return s.str();
}

double radius_of(const ChartPoint& p) {
  return p.chart == Chart::GeodesicPolar ? p.coords[0] : norm(p.coords);
}

Vector sphere_direction(std::span<const double> angles, int n) {
  Vector w(n);
  double s = 1.0;
  for (int l = 0; l < n - 1; ++l) {
    w[l] = s * std::cos(angles[l]);
    s *= std::sin(angles[l]);
  }
  w[n - 1] = s;
  return w;
}

Vector polar_to_cartesian(const Vector& q) {
  const int n = q.size();
  const Vector w = sphere_direction(q.span().subspan(1), n);
  return q[0] * w;
}

Vector cartesian_to_polar(const Vector& x) {
  const int n = x.size();
  Vector q(n);
  q[0] = norm(x);
  // theta_l = atan2(|x_{l+1..}|, x_l); the last angle spans (-pi, pi] -> [0, 2pi).
  for (int l = 0; l < n - 2; ++l) {
    double tail = 0.0;
    for (int k = l + 1; k < n; ++k) tail += x[k] * x[k];
    q[l + 1] = std::atan2(std::sqrt(tail), x[l]);
  }
  double last = std::atan2(x[n - 1], x[n - 2]);
  if (last < 0.0) last += 2.0 * std::numbers::pi;
  q[n - 1] = last;
  return q;
}

Matrix metric_at(const ModelManifold& m, const ChartPoint& p) {
  const int n = m.dim();
  require(p.coords.size() == n, ErrorKind::Argument, "chart point has wrong dimension");
  if (p.chart == Chart::GeodesicPolar) {
    check_polar(m, p.coords);
    return Matrix::diagonal(polar_metric(m, p.coords).h);
  }
  const double r = norm(p.coords);
  if (m.family() == Family::Euclidean || r < kPoleRadius) return Matrix::identity(n);
  const NormalChartTerms t = normal_chart_terms(m.profile(), r);
  return t.phi * Matrix::identity(n) + t.psi * outer(p.coords, p.coords);
}

Matrix inverse_metric_at(const ModelManifold& m, const ChartPoint& p) {
  const int n = m.dim();
  if (p.chart == Chart::GeodesicPolar) {
    check_polar(m, p.coords);
    const PolarMetric pm = polar_metric(m, p.coords);
    Vector inv(n);
    for (int i = 0; i < n; ++i) inv[i] = 1.0 / pm.h[i];
    return Matrix::diagonal(inv);
  }
  const double r = norm(p.coords);
  if (m.family() == Family::Euclidean || r < kPoleRadius) return Matrix::identity(n);
  const NormalChartTerms t = normal_chart_terms(m.profile(), r);
  const Vector xhat = (1.0 / r) * p.coords;
  const Matrix radial = outer(xhat, xhat);
  return (1.0 / t.phi) * (Matrix::identity(n) - radial) + radial;
}

Christoffel christoffel_at(const ModelManifold& m, const ChartPoint& p) {
  const int n = m.dim();
  Christoffel gamma;
  gamma.dim = n;
  if (p.chart == Chart::GeodesicPolar) {
    check_polar(m, p.coords);
    const PolarMetric pm = polar_metric(m, p.coords);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (i == k) {
          gamma(k, k, k) = pm.dh(k, k) / (2.0 * pm.h[k]);
          continue;
        }
        gamma(k, k, i) = gamma(k, i, k) = pm.dh(k, i) / (2.0 * pm.h[k]);
        gamma(k, i, i) = -pm.dh(i, k) / (2.0 * pm.h[k]);
      }
    }
    return gamma;
  }

  require(p.coords.size() == n, ErrorKind::Argument, "chart point has wrong dimension");
  const double r = norm(p.coords);
  if (m.family() == Family::Euclidean || r < kPoleRadius) return gamma;
  const NormalChartTerms t = normal_chart_terms(m.profile(), r);
  const Vector& x = p.coords;
  const Vector xhat = (1.0 / r) * x;

  // First kind: Gamma_{m,ij} = 1/2 [phi' (xh_i d_mj + xh_j d_mi - xh_m d_ij)
  //                                 + psi' x_i x_j x_m / r + 2 psi d_ij x_m]
  const Matrix ginv = inverse_metric_at(m, p);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vector lowered(n);
      for (int mm = 0; mm < n; ++mm) {
        const double dij = i == j ? 1.0 : 0.0;
        const double dmj = mm == j ? 1.0 : 0.0;
        const double dmi = mm == i ? 1.0 : 0.0;
        lowered[mm] = 0.5 * (t.dphi * (xhat[i] * dmj + xhat[j] * dmi - xhat[mm] * dij) +
                             t.dpsi * x[i] * x[j] * x[mm] / r + 2.0 * t.psi * dij * x[mm]);
      }
      const Vector raised = ginv * lowered;
      for (int k = 0; k < n; ++k) gamma(k, i, j) = gamma(k, j, i) = raised[k];
    }
  }
  return gamma;
}

PointCurvature point_curvature(const ModelManifold& m, const ChartPoint& p) {
  const int n = m.dim();
  PointCurvature c;
  c.dim = n;
  c.radial_chart = Vector(n);
  const double r = radius_of(p);
  switch (m.family()) {
    case Family::Euclidean:
      return c;
    case Family::ConstantCurvature:
      c.tangential = c.radial = m.curvature();
      return c;
    case Family::WarpedProduct:
      break;
  }
  c.tangential = m.profile().tangential_curvature(r);
  c.radial = m.profile().radial_curvature(r);
  c.isotropic = false;
  if (p.chart == Chart::GeodesicPolar) {
    c.radial_chart[0] = 1.0;
  } else if (r >= kPoleRadius) {
    c.radial_chart = (1.0 / r) * p.coords;
  }
  return c;
}

RiemannTensor riemann_in_frame(const PointCurvature& c, const Vector& nr) {
  const int n = c.dim;
  RiemannTensor riem(n);
  const double kt = c.tangential;
  const double dk = c.isotropic ? 0.0 : c.radial - c.tangential;
  auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int e = 0; e < n; ++e) {
          double v = kt * (d(a, cc) * d(b, e) - d(a, e) * d(b, cc));
          if (dk != 0.0)
            v += dk * (d(a, cc) * nr[b] * nr[e] + d(b, e) * nr[a] * nr[cc] -
                       d(a, e) * nr[b] * nr[cc] - d(b, cc) * nr[a] * nr[e]);
          riem(a, b, cc, e) = v;
        }
  return riem;
}

CurvatureTensorData riemann_at(const ModelManifold& m, const ChartPoint& p,
                               const std::vector<Vector>& frame) {
  const int n = m.dim();
  require(static_cast<int>(frame.size()) == n, ErrorKind::Argument,
          "frame must contain n vectors");
  const Matrix g = metric_at(m, p);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double gram = dot(frame[a], g * frame[b]);
      if (std::abs(gram - (a == b ? 1.0 : 0.0)) > 1e-8)
        fail(ErrorKind::Argument, "frame is not orthonormal");
    }

  const PointCurvature pc = point_curvature(m, p);
  const Vector g_radial = g * pc.radial_chart;
  Vector nr(n);
  for (int a = 0; a < n; ++a) nr[a] = dot(frame[a], g_radial);

  CurvatureTensorData out;
  out.frame = frame;
  out.riemann = riemann_in_frame(pc, nr);
  out.sectional = Matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.sectional(i, j) = out.riemann(i, j, i, j);
  for (int i = 0; i < n - 1; ++i) out.ricci_n += out.sectional(i, n - 1);
  return out;
}

double unit_sphere_volume(int n) {
  require(n >= 1, ErrorKind::Argument, "sphere dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

SphereData sphere_data(const ModelManifold& m, double rho) {
  require(rho > 0.0, ErrorKind::Argument, "sphere radius must be positive");
  const double f = m.profile().f(rho);
  return {m.profile().df(rho) / f, std::pow(f, m.dim() - 1)};
}

double sphere_total_mean_curvature(const ModelManifold& m, int r, double rho) {
  const int n = m.dim();
  require(r >= 0 && r <= n - 1, ErrorKind::Argument, "need 0 <= r <= n-1");
  require(rho > 0.0, ErrorKind::Argument, "sphere radius must be positive");
  const double f = m.profile().f(rho);
  const double df = m.profile().df(rho);
  return static_cast<double>(algebra::binomial(n - 1, r)) * unit_sphere_volume(n) *
         std::pow(f, n - 1 - r) * std::pow(df, r);
}

}  // namespace curvatura::manifold
