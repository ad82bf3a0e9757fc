#include <cmath>
#include <map>
#include <numbers>

#include "curvature_integrals.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "model_specs.hpp"
#include "symmetric_algebra.hpp"

using namespace curvatura;
using namespace curvatura::integrals;
using levelset::ScalarField;
using manifold::ModelManifold;
using manifold::WarpingProfile;
using quadrature::radial_integral;

namespace {
constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("total mean curvature of spheres") {
  const auto spec = QuadratureSpec::uniform(16, 16);
  const auto u = ScalarField::radial_distance(3);
  const auto flat = ModelManifold::euclidean(3);
  CHECK(std::abs(total_mean_curvature(u, flat, 1.0, 1, spec).value - 8 * kPi) < 1e-8);

  const auto hyp = ModelManifold::constant_curvature(-1.0, 3);
  const double c = std::cosh(1.0), s = std::sinh(1.0);
  const auto m2 = total_mean_curvature(u, hyp, 1.0, 2, spec);
  CHECK(std::abs(m2.value - 4 * kPi * c * c) < 1e-7);
  CHECK(m2.r == 2);
  CHECK(m2.node_count > 0);
  CHECK(std::abs(total_mean_curvature(u, hyp, 1.0, 0, spec).value - 4 * kPi * s * s) < 1e-8);

  // r = -1 is the enclosed volume
  const auto vol = total_mean_curvature(u, hyp, 1.0, -1, spec);
  CHECK(std::abs(vol.value - 4 * kPi * (s * c - 1) / 2) < 1e-9);
  CHECK_THROWS_AS(total_mean_curvature(u, hyp, 1.0, 3, spec), Error);
  CHECK_THROWS_AS(total_mean_curvature(u, hyp, 1.0, -2, spec), Error);
}

TEST_CASE("enclosed volume of a non-radial field") {
  SymMatrix q(3);
  q.set(0, 0, 1.0);
  q.set(1, 1, 1.0);
  q.set(2, 2, 4.0);
  const auto u = ScalarField::quadratic_form(q);
  const auto flat = ModelManifold::euclidean(3);
  // semi-axes 1, 1, 1/2
  const double exact = 4.0 / 3 * kPi * 0.5;
  const auto coarse = total_mean_curvature(u, flat, 0.5, -1, QuadratureSpec::uniform(16, 16));
  CHECK(std::abs(coarse.value - exact) <= coarse.error_estimate);
  const auto vol = total_mean_curvature(u, flat, 0.5, -1, QuadratureSpec::uniform(64, 16));
  CHECK(vol.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("correction index sets") {
  // first sum: i_1 < .. < i_{r-1}, i_r distinct from them
  const auto& s = correction_index_sets(4, 2);
  CHECK(s.first.size() == 3 * 2);
  CHECK(s.second.size() == 3 * 2);
  for (const auto& f : s.first) {
    CHECK(f.ascending.size() == 1);
    CHECK(f.last != f.ascending[0]);
  }
  CHECK(correction_index_sets(4, 1).second.empty());
  CHECK(correction_index_sets(4, 1).first.size() == 3);
  CHECK(correction_index_sets(5, 3).first.size() == 6 * 2);
  CHECK(&correction_index_sets(4, 2) == &s);
}

TEST_CASE("Euclidean comparison has no curvature terms") {
  const auto spec = QuadratureSpec::uniform(24, 12);
  const auto flat = ModelManifold::euclidean(3);
  for (const char* kind : {"radial", "quadratic", "offcenter"}) {
    const auto u = build_field(default_field(kind, 3), 3);
    const double c1 = std::string(kind) == "quadratic" ? 0.2 : 0.6;
    const double c2 = std::string(kind) == "quadratic" ? 0.5 : 1.0;
    for (int r = 0; r < 3; ++r) {
      const auto b = comparison_rhs(u, flat, c1, c2, r, spec);
      CHECK(b.term_sectional == 0.0);
      CHECK(b.term_mixed == 0.0);
      CHECK(std::abs(b.lhs - b.term_principal) <= 2 * b.error_budget + 1e-12);
      CHECK(b.residual == doctest::Approx(b.lhs - b.rhs()));
    }
  }
}

TEST_CASE("poly3 radial comparison matches the radial closed form") {
  const int n = 4, r = 2;
  const auto m = ModelManifold::warped(WarpingProfile::poly3(), n);
  const auto u = ScalarField::radial_distance(n);
  const auto b = comparison_rhs(u, m, 0.5, 1.5, r, QuadratureSpec::uniform(8, 24));
  CHECK(std::abs(b.term_mixed) < 1e-12);
  CHECK(std::abs(b.residual) / b.scale() < 1e-6);
  const auto& p = m.profile();
  const double area = manifold::unit_sphere_volume(n);
  const auto sectional = radial_integral(
      [&](double t) {
        const double k = p.df(t) / p.f(t);
        return r * algebra::binomial(n - 1, r) * std::pow(k, r - 1) * (p.ddf(t) / p.f(t)) *
               std::pow(p.f(t), n - 1) * area;
      },
      0.5, 1.5);
  CHECK(rel(b.term_sectional, sectional.value) < 1e-8);
  const double lhs = manifold::sphere_total_mean_curvature(m, r, 1.5) -
                     manifold::sphere_total_mean_curvature(m, r, 0.5);
  CHECK(rel(b.lhs, lhs) < 1e-8);
}

TEST_CASE("hyperbolic off-center comparison") {
  const auto m = ModelManifold::constant_curvature(-1.0, 3);
  const auto u = build_field(default_field("offcenter", 3), 3);
  const auto b = comparison_rhs(u, m, 1.0, 2.0, 1, QuadratureSpec::uniform(24, 12));
  CHECK(std::abs(b.residual) / b.scale() < 1e-3);
  CHECK(b.term_mixed == 0.0);  // the second sum is empty for r = 1
}

TEST_CASE("constant-curvature identity") {
  const auto spec = QuadratureSpec::uniform(12, 16);
  const auto m = ModelManifold::constant_curvature(-1.0, 3);
  const auto u = ScalarField::radial_distance(3);
  const double a = 0.5, bnd = 1.0;
  const auto b = comparison_rhs_constant(u, m, a, bnd, 1, spec);
  const double lhs = 8 * kPi * (std::sinh(bnd) * std::cosh(bnd) - std::sinh(a) * std::cosh(a));
  const double rhs = 8 * kPi * (std::sinh(2 * bnd) - std::sinh(2 * a)) / 2;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  CHECK(std::abs(b.lhs - lhs) < 1e-8);
  CHECK(std::abs(b.residual) < 1e-8);

  const auto full = comparison_rhs(u, m, a, bnd, 1, spec);
  CHECK(std::abs(full.rhs() - b.rhs()) <= full.error_budget + b.error_budget + 1e-12);

  const auto m4 = ModelManifold::constant_curvature(-1.0, 4);
  const auto u4 = ScalarField::radial_distance(4);
  CHECK(std::abs(comparison_rhs_constant(u4, m4, 0.5, 1.0, 2, spec).residual) < 1e-7);

  const auto zero = ModelManifold::constant_curvature(0.0, 3);
  const auto flat = ModelManifold::euclidean(3);
  CHECK(comparison_rhs_constant(u, zero, a, bnd, 2, spec).rhs() ==
        doctest::Approx(comparison_rhs(u, flat, a, bnd, 2, spec).rhs()).epsilon(1e-12));

  const auto poly = ModelManifold::warped(WarpingProfile::poly3(), 3);
  CHECK_THROWS_AS(comparison_rhs_constant(u, poly, a, bnd, 1, spec), Error);
}

TEST_CASE("Ricci form") {
  const auto spec = QuadratureSpec::uniform(10, 16);
  const auto u = ScalarField::radial_distance(3);
  const auto flat = ModelManifold::euclidean(3);
  CHECK(ricci_comparison(u, flat, 0.5, 1.0, spec).term_sectional == 0.0);

  const auto hyp = ModelManifold::constant_curvature(-0.5, 3);
  const auto ric = ricci_comparison(u, hyp, 0.5, 1.0, spec);
  const double k = std::sqrt(0.5);
  const auto vol = radial_integral(
      [&](double t) { return 4 * kPi * std::pow(std::sinh(k * t) / k, 2); }, 0.5, 1.0);
  CHECK(ric.term_sectional == doctest::Approx(-(3 - 1) * -0.5 * vol.value).epsilon(1e-9));

  const auto poly = ModelManifold::warped(WarpingProfile::poly3(), 3);
  const auto a = ricci_comparison(u, poly, 0.5, 1.0, spec);
  const auto b = comparison_rhs(u, poly, 0.5, 1.0, 1, spec);
  CHECK(rel(a.term_sectional, b.term_sectional) < 1e-9);
}

TEST_CASE("double-factorial recursion for M_{n-1}") {
  for (double a : {-0.5, -1.0})
    for (double rho : {0.5, 1.0}) {
      const auto m3 = ModelManifold::constant_curvature(a, 3);
      const double p3 = solanes_prediction({{0, manifold::sphere_total_mean_curvature(m3, 0, rho)}},
                                           a, 3);
      CHECK(p3 == doctest::Approx(manifold::sphere_total_mean_curvature(m3, 2, rho)).epsilon(1e-12));

      const auto m5 = ModelManifold::constant_curvature(a, 5);
      const double m0 = manifold::sphere_total_mean_curvature(m5, 0, rho);
      const double m2 = manifold::sphere_total_mean_curvature(m5, 2, rho);
      const double p5 = solanes_prediction({{0, m0}, {2, m2}}, a, 5);
      CHECK(p5 == doctest::Approx(manifold::unit_sphere_volume(5) - a / 3 * m2 - a * a * m0)
                      .epsilon(1e-14));
      CHECK(p5 == doctest::Approx(manifold::sphere_total_mean_curvature(m5, 4, rho)).epsilon(1e-12));
    }
  CHECK(std::cosh(1.0) * std::cosh(1.0) * 4 * kPi ==
        doctest::Approx(solanes_prediction({{0, 4 * kPi * std::sinh(1.0) * std::sinh(1.0)}}, -1, 3)));
  for (int n : {3, 4, 5, 6}) {
    std::map<int, double> lower;
    for (int j = n - 3; j >= -1; j -= 2) lower[j] = 123.0;
    CHECK(solanes_prediction(lower, 0.0, n) == doctest::Approx(manifold::unit_sphere_volume(n)));
  }
  CHECK_THROWS_AS(solanes_prediction({}, -1.0, 3), Error);
}

TEST_CASE("ball bound") {
  CHECK(ball_bound(1, 2.0, 0.0, 3) ==
        doctest::Approx(2 * manifold::unit_sphere_volume(3) * 2.0).epsilon(1e-14));
  CHECK(ball_bound(1, 1.0, -1.0, 3) ==
        doctest::Approx(8 * kPi * std::sinh(1.0) * std::cosh(1.0)).epsilon(1e-14));
  for (int n : {3, 4})
    for (int r = 1; r < n; ++r)
      CHECK(ball_bound(r, 1.3, -1.0, n) >= ball_bound(r, 1.3, 0.0, n));
  CHECK(ball_bound(1, 1.0, -1e-14, 3) == doctest::Approx(ball_bound(1, 1.0, 0.0, 3)).epsilon(1e-10));
}

TEST_CASE("M_1 volume bound") {
  const auto z = m1_volume_bound(0.0, 3.0, 4);
  CHECK(z.general == 0.0);
  CHECK_FALSE(z.dim3.has_value());
  const auto b = m1_volume_bound(-1.0, 2.5, 3);
  CHECK(b.general == doctest::Approx(5.0));
  REQUIRE(b.dim3.has_value());
  CHECK(*b.dim3 == doctest::Approx(10.0));

  // unit hyperbolic ball: M_1 = 8 pi sinh cosh > 4 |B| = 8 pi (sinh cosh - 1)
  const double s = std::sinh(1.0), c = std::cosh(1.0);
  const double vol = 2 * kPi * (s * c - 1);
  const auto hb = m1_volume_bound(-1.0, vol, 3);
  CHECK(*hb.dim3 == doctest::Approx(8 * kPi * (s * c - 1)));
  CHECK(ball_bound(1, 1.0, -1.0, 3) > *hb.dim3);
}
