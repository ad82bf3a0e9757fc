#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "model_manifolds.hpp"
#include "verification.hpp"

using namespace curvatura;
using namespace curvatura::manifold;

namespace {
constexpr double kPi = std::numbers::pi;

ChartPoint cart(Vector x) { return {Chart::Cartesian, x}; }

std::vector<ModelManifold> models(int n) {
  return {ModelManifold::euclidean(n), ModelManifold::constant_curvature(-1.0, n),
          ModelManifold::constant_curvature(-0.5, n),
          ModelManifold::warped(WarpingProfile::hyperbolic(-1.0), n),
          ModelManifold::warped(WarpingProfile::poly3(), n)};
}

Vector random_point(verify::CaseRng& rng, int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
  return x;
}

// Gamma^k_ij from central differences of the metric.
Christoffel christoffel_fd(const ModelManifold& m, const ChartPoint& p, double h) {
  const int n = m.dim();
  std::vector<Matrix> dg(n);
  for (int l = 0; l < n; ++l) {
    ChartPoint a = p, b = p;
    a.coords[l] += h;
    b.coords[l] -= h;
    dg[l] = (1.0 / (2 * h)) * (metric_at(m, a) - metric_at(m, b));
  }
  const Matrix gi = inverse_metric_at(m, p);
  Christoffel c;
  c.dim = n;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        c(k, i, j) = 0.5 * s;
      }
  return c;
}

double christoffel_error(const ModelManifold& m, const ChartPoint& p, double h) {
  const auto exact = christoffel_at(m, p);
  const auto fd = christoffel_fd(m, p, h);
  double e = 0.0;
  const int n = m.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) e = std::max(e, std::abs(exact(k, i, j) - fd(k, i, j)));
  return e;
}

std::vector<Vector> identity_frame(const ModelManifold& m, const ChartPoint& p) {
  const Matrix l = cholesky_lower(metric_at(m, p));
  const Matrix e = transpose(lower_triangular_inverse(l));
  std::vector<Vector> frame;
  for (int a = 0; a < m.dim(); ++a) frame.push_back(e.column(a));
  return frame;
}
}  // namespace

TEST_CASE("metric in the polar and Cartesian charts") {
  const auto flat = ModelManifold::euclidean(3);
  CHECK(max_abs(metric_at(flat, cart({0.3, -0.2, 0.5})) - Matrix::identity(3)) < 1e-15);

  const auto hyp = ModelManifold::warped(WarpingProfile::hyperbolic(-1.0), 2);
  const Matrix g = metric_at(hyp, {Chart::GeodesicPolar, {1.0, 0.7}});
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  CHECK(std::abs(g(0, 1)) < 1e-15);

  CHECK_THROWS_AS(metric_at(hyp, {Chart::GeodesicPolar, {0.0, 0.7}}), Error);
}

TEST_CASE("polar Christoffel symbol Gamma^r_thth = -f f'") {
  const auto m = ModelManifold::warped(WarpingProfile::poly3(), 2);
  const double r = 0.8;
  const auto c = christoffel_at(m, {Chart::GeodesicPolar, {r, 1.1}});
  const double f = r + r * r * r / 6, df = 1 + r * r / 2;
  CHECK(c(0, 1, 1) == doctest::Approx(-f * df).epsilon(1e-13));
  CHECK(c(1, 0, 1) == doctest::Approx(df / f).epsilon(1e-13));
}

TEST_CASE("analytic Christoffels match finite differences at second order") {
  verify::CaseRng rng(3, 9);
  for (int n : {2, 3, 4}) {
    for (const auto& m : models(n)) {
      const auto p = cart(random_point(rng, n));
      const double e1 = christoffel_error(m, p, 1e-2);
      const double e2 = christoffel_error(m, p, 5e-3);
      const double e3 = christoffel_error(m, p, 2.5e-3);
      if (e1 < 1e-11) continue;  // flat: exact up to roundoff
      CHECK(std::log2(e1 / e2) >= 1.9);
      CHECK(std::log2(e2 / e3) >= 1.9);
    }
    const auto polar = ModelManifold::warped(WarpingProfile::poly3(), n);
    ChartPoint p{Chart::GeodesicPolar, Vector(n, 1.0)};
    p.coords[0] = 0.9;
    const double e1 = christoffel_error(polar, p, 1e-2);
    const double e2 = christoffel_error(polar, p, 5e-3);
    CHECK(std::log2(e1 / e2) >= 1.9);
  }
}

TEST_CASE("model equivalences") {
  verify::CaseRng rng(4, 4);
  for (int n : {2, 3, 5}) {
    const auto flat = ModelManifold::euclidean(n);
    const auto zero = ModelManifold::constant_curvature(0.0, n);
    const auto c1 = ModelManifold::constant_curvature(-1.0, n);
    const auto w1 = ModelManifold::warped(WarpingProfile::hyperbolic(-1.0), n);
    for (int k = 0; k < 5; ++k) {
      const auto p = cart(random_point(rng, n));
      CHECK(max_abs(metric_at(flat, p) - metric_at(zero, p)) < 1e-12);
      CHECK(max_abs(metric_at(c1, p) - metric_at(w1, p)) < 1e-12);
      const auto a = christoffel_at(c1, p), b = christoffel_at(w1, p);
      const auto z = christoffel_at(zero, p);
      for (int i = 0; i < n * n * n; ++i) {
        const int kk = i / (n * n), ii = (i / n) % n, jj = i % n;
        CHECK(std::abs(a(kk, ii, jj) - b(kk, ii, jj)) < 1e-10);
        CHECK(std::abs(z(kk, ii, jj)) < 1e-12);
      }
    }
    for (double rho : {0.1, 1.0, 2.5}) {
      const auto s1 = sphere_data(c1, rho), s2 = sphere_data(w1, rho);
      CHECK(s1.principal_curvature == doctest::Approx(s2.principal_curvature).epsilon(1e-12));
      CHECK(s1.volume_factor == doctest::Approx(s2.volume_factor).epsilon(1e-12));
      for (int r = 0; r < n; ++r)
        CHECK(sphere_total_mean_curvature(c1, r, rho) ==
              doctest::Approx(sphere_total_mean_curvature(w1, r, rho)).epsilon(1e-10));
    }
  }
}

TEST_CASE("curvature tensor symmetries and signs") {
  verify::CaseRng rng(8, 8);
  for (int n : {2, 3, 4}) {
    for (const auto& m : models(n)) {
      const auto p = cart(random_point(rng, n));
      const auto data = riemann_at(m, p, identity_frame(m, p));
      const auto& R = data.riemann;
      double ric = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a != b) CHECK(data.sectional(a, b) <= 1e-12);
          CHECK(data.sectional(a, b) == doctest::Approx(R(a, b, a, b)));
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              CHECK(std::abs(R(a, b, c, d) + R(b, a, c, d)) < 1e-10);
              CHECK(std::abs(R(a, b, c, d) + R(a, b, d, c)) < 1e-10);
              CHECK(std::abs(R(a, b, c, d) - R(c, d, a, b)) < 1e-10);
              CHECK(std::abs(R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c)) < 1e-10);
            }
        }
      for (int i = 0; i < n - 1; ++i) ric += data.sectional(i, n - 1);
      CHECK(data.ricci_n == doctest::Approx(ric).epsilon(1e-12));
      if (m.family() == Family::ConstantCurvature)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (a != b) CHECK(data.sectional(a, b) == doctest::Approx(m.curvature()).epsilon(1e-12));
      if (m.family() == Family::Euclidean)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) CHECK(R(a, b, a, b) == 0.0);
    }
  }
  const auto hyp = ModelManifold::warped(WarpingProfile::hyperbolic(-1.0), 3);
  const auto p = cart({0.4, 0.5, -0.3});
  const auto data = riemann_at(hyp, p, identity_frame(hyp, p));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(data.sectional(a, b) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("non-orthonormal frame is rejected") {
  const auto m = ModelManifold::constant_curvature(-1.0, 3);
  const auto p = cart({0.5, 0.1, 0.2});
  std::vector<Vector> frame{Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)};
  CHECK_THROWS_AS(riemann_at(m, p, frame), Error);
}

TEST_CASE("unit sphere volumes") {
  CHECK(unit_sphere_volume(2) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(unit_sphere_volume(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(unit_sphere_volume(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
  CHECK(unit_sphere_volume(5) == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-15));
}

TEST_CASE("sphere data and sphere total mean curvature") {
  const auto flat = ModelManifold::euclidean(3);
  const auto s = sphere_data(flat, 2.0);
  CHECK(s.principal_curvature == doctest::Approx(0.5));
  CHECK(s.volume_factor == doctest::Approx(4.0));
  CHECK_THROWS_AS(sphere_data(flat, 0.0), Error);

  const auto hyp = ModelManifold::constant_curvature(-1.0, 3);
  const auto h = sphere_data(hyp, 1.0);
  CHECK(h.principal_curvature == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-14));
  CHECK(h.volume_factor == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));

  CHECK(sphere_total_mean_curvature(flat, 1, 1.0) == doctest::Approx(8 * kPi));
  for (double rho : {0.3, 1.0, 4.0}) {
    CHECK(sphere_total_mean_curvature(flat, 2, rho) == doctest::Approx(4 * kPi));
    CHECK(sphere_total_mean_curvature(hyp, 2, rho) ==
          doctest::Approx(4 * kPi * std::cosh(rho) * std::cosh(rho)).epsilon(1e-13));
  }
}

TEST_CASE("small-sphere slopes") {
  for (int n : {3, 4}) {
    const auto m = ModelManifold::warped(WarpingProfile::poly3(), n);
    for (int r = 0; r < n; ++r) {
      const double a = sphere_total_mean_curvature(m, r, 0.01);
      const double b = sphere_total_mean_curvature(m, r, 0.02);
      CHECK(std::abs(std::log2(b / a) - (n - 1 - r)) < 0.02);
    }
    CHECK(sphere_total_mean_curvature(m, n - 1, 0.01) ==
          doctest::Approx(unit_sphere_volume(n)).epsilon(0.01));
  }
}

TEST_CASE("profile validation") {
  CHECK_NOTHROW(validate_profile(WarpingProfile::poly3(), 10.0));
  CHECK_NOTHROW(validate_profile(WarpingProfile::hyperbolic(-2.0), 5.0));
  WarpingProfile sphere{"sin", [](double r) { return std::sin(r); },
                        [](double r) { return std::cos(r); },
                        [](double r) { return -std::sin(r); }, {}, {}};
  CHECK_THROWS_AS(validate_profile(sphere, 1.0), Error);
  WarpingProfile wrong = WarpingProfile::poly3();
  wrong.df = [](double r) { return 1 + r * r; };
  CHECK_THROWS_AS(validate_profile(wrong, 2.0), Error);
  CHECK_THROWS_AS(ModelManifold::constant_curvature(0.5, 3), Error);
}
