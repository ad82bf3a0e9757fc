#include <cmath>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "level_set_geometry.hpp"
#include "model_specs.hpp"
#include "symmetric_algebra.hpp"
#include "verification.hpp"

using namespace curvatura;
using namespace curvatura::levelset;
using manifold::Chart;
using manifold::WarpingProfile;

namespace {

ChartPoint cart(Vector x) { return {Chart::Cartesian, x}; }

std::vector<ModelManifold> models(int n) {
  return {ModelManifold::euclidean(n), ModelManifold::constant_curvature(-1.0, n),
          ModelManifold::warped(WarpingProfile::poly3(), n)};
}

std::vector<ScalarField> fields(int n) {
  std::vector<ScalarField> out;
  for (const char* kind : {"radial", "radial_sq", "quadratic", "offcenter"})
    out.push_back(build_field(default_field(kind, n), n));
  return out;
}

Vector random_point(verify::CaseRng& rng, int n) {
  for (;;) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
    Vector off = x;
    off[0] -= 0.3;
    if (norm(x) > 0.3 && norm(off) > 0.2) return x;
  }
}

double sigma(const Vector& k, int r) { return algebra::sigma_elementary(k.span(), r); }

}  // namespace

TEST_CASE("Hessian of |x|^2/2 in Euclidean space is the identity") {
  const auto m = ModelManifold::euclidean(4);
  const auto u = ScalarField::radial_distance_squared_half(4);
  const auto h = hessian_frame(u, m, cart({0.3, -0.7, 0.2, 1.1}));
  CHECK(max_abs(h.hess_frame.matrix() - Matrix::identity(4)) < 1e-13);
  CHECK(h.grad_norm == doctest::Approx(norm(Vector{0.3, -0.7, 0.2, 1.1})));
}

TEST_CASE("Hessian of the distance to the pole has eigenvalues f'/f and 0") {
  for (const auto& m : models(3)) {
    const auto u = ScalarField::radial_distance(3);
    const auto p = cart({0.5, 0.4, -0.6});
    const double r = manifold::radius_of(p);
    const auto h = hessian_frame(u, m, p);
    const auto eig = jacobi_eigen(h.hess_frame);
    const double k = manifold::sphere_data(m, r).principal_curvature;
    CHECK(std::abs(eig.values[0]) < 1e-12);
    CHECK(eig.values[1] == doctest::Approx(k).epsilon(1e-12));
    CHECK(eig.values[2] == doctest::Approx(k).epsilon(1e-12));
    CHECK(h.grad_norm == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("finite-difference Hessian converges at second order") {
  verify::CaseRng rng(21, 1);
  for (int n : {2, 3, 4})
    for (const auto& m : models(n))
      for (const auto& u : fields(n)) {
        const auto p = cart(random_point(rng, n));
        const auto exact = hessian_frame(u, m, p, Derivatives::Analytic);
        const double h0 = 1e-2 * (1 + norm(p.coords));
        const double e1 = max_abs(
            hessian_frame(u, m, p, Derivatives::FiniteDifference, h0).hess_frame.matrix() -
            exact.hess_frame.matrix());
        const double e2 = max_abs(
            hessian_frame(u, m, p, Derivatives::FiniteDifference, h0 / 2).hess_frame.matrix() -
            exact.hess_frame.matrix());
        if (e1 < 1e-9) continue;
        CHECK(std::log2(e1 / e2) >= 1.9);
      }
}

TEST_CASE("principal curvatures of spheres and the ellipsoid") {
  const auto flat = ModelManifold::euclidean(3);
  const auto sq = ScalarField::radial_distance_squared_half(3);
  const auto pf = principal_frame(hessian_frame(sq, flat, cart({0, 0, 2.0})));
  for (int i = 0; i < 2; ++i) {
    CHECK(pf.kappa[i] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(pf.grad_norm_derivs[i]) < 1e-13);
  }

  const auto hyp = ModelManifold::constant_curvature(-1.0, 4);
  const auto radial = ScalarField::radial_distance(4);
  const auto p = cart({0.6, -0.3, 0.2, 0.9});
  const double r = manifold::radius_of(p);
  const auto ph = principal_frame(hessian_frame(radial, hyp, p));
  for (int i = 0; i < 3; ++i) CHECK(ph.kappa[i] == doctest::Approx(1 / std::tanh(r)).epsilon(1e-12));

  SymMatrix q(3);
  q.set(0, 0, 1.0);
  q.set(1, 1, 1.0);
  q.set(2, 2, 4.0);
  const auto ell = ScalarField::quadratic_form(q);
  const auto pe = principal_frame(hessian_frame(ell, flat, cart({1, 0, 0})));
  CHECK(pe.kappa[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pe.kappa[1] == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(std::abs(pe.nu()[0]) == doctest::Approx(1.0));
}

TEST_CASE("principal frame structure") {
  verify::CaseRng rng(31, 2);
  for (int n : {3, 5})
    for (const auto& m : models(n))
      for (const auto& u : fields(n)) {
        const auto p = cart(random_point(rng, n));
        const auto h = hessian_frame(u, m, p);
        const auto pf = principal_frame(h);
        const Matrix b = pf.basis;
        const Vector gp = transpose(b) * h.grad_frame;
        const Matrix hp = transpose(b) * h.hess_frame.matrix() * b;
        const double hn = std::max(1.0, max_abs(h.hess_frame.matrix()));
        for (int i = 0; i < n - 1; ++i) {
          CHECK(std::abs(gp[i]) < 1e-10 * h.grad_norm);
          CHECK(hp(i, i) / h.grad_norm == doctest::Approx(pf.kappa[i]).epsilon(1e-10));
          CHECK(hp(i, n - 1) == doctest::Approx(pf.grad_norm_derivs[i]).epsilon(1e-10));
          for (int j = 0; j < n - 1; ++j)
            if (i != j) CHECK(std::abs(hp(i, j)) < 1e-8 * hn);
          if (i > 0) CHECK(pf.kappa[i - 1] <= pf.kappa[i]);
        }
        CHECK(gp[n - 1] == doctest::Approx(h.grad_norm).epsilon(1e-12));
      }
}

TEST_CASE("sigma_r is independent of the tangent basis") {
  verify::CaseRng rng(41, 3);
  const int n = 4;
  for (const auto& m : models(n))
    for (const auto& u : fields(n)) {
      const auto p = cart(random_point(rng, n));
      const auto h = hessian_frame(u, m, p);
      const auto pf = principal_frame(h);
      const Vector nu = pf.nu();
      // random orthonormal basis of nu-perp by Gram-Schmidt
      std::vector<Vector> basis;
      while (static_cast<int>(basis.size()) < n - 1) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        v = v - dot(v, nu) * nu;
        for (const auto& w : basis) v = v - dot(v, w) * w;
        if (norm(v) < 1e-3) continue;
        basis.push_back((1.0 / norm(v)) * v);
      }
      SymMatrix shape(n - 1);
      for (int i = 0; i < n - 1; ++i)
        for (int j = i; j < n - 1; ++j)
          shape.set(i, j, dot(basis[i], h.hess_frame.matrix() * basis[j]) / h.grad_norm);
      for (int r = 0; r < n; ++r) {
        const double a = sigma(pf.kappa, r), b = algebra::sigma_hessian_delta(shape, r);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
      }
    }
}

TEST_CASE("|grad u|_i matches a difference quotient of |grad u|") {
  verify::CaseRng rng(51, 4);
  const int n = 3;
  for (const auto& m : models(n))
    for (const auto& u : fields(n)) {
      const auto p = cart(random_point(rng, n));
      const auto h = hessian_frame(u, m, p);
      const auto pf = principal_frame(h);
      for (int i = 0; i < n - 1; ++i) {
        const Vector dir = frame_to_chart(h, pf.direction(i));
        auto gn = [&](double s) {
          return hessian_frame(u, m, cart(p.coords + s * dir)).grad_norm;
        };
        const double step = 1e-4;
        const double fd = (gn(step) - gn(-step)) / (2 * step);
        CHECK(std::abs(fd - pf.grad_norm_derivs[i]) < 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
}

TEST_CASE("level mean curvature") {
  const auto flat = ModelManifold::euclidean(3);
  const auto sq = ScalarField::radial_distance_squared_half(3);
  CHECK(level_mean_curvature(sq, flat, cart({0, 1.5, 0}), 2) ==
        doctest::Approx(1 / 2.25).epsilon(1e-13));
  CHECK(level_mean_curvature(sq, flat, cart({0, 1.5, 0}), 0) == 1.0);

  const auto hyp = ModelManifold::constant_curvature(-1.0, 3);
  const auto radial = ScalarField::radial_distance(3);
  const auto p = cart({0.7, 0.0, 0.0});
  CHECK(level_mean_curvature(radial, hyp, p, 1) == doctest::Approx(2 / std::tanh(0.7)).epsilon(1e-12));

  // Euclidean |x|^2/2: sigma_r = C(n-1,r)/rho^r
  const int n = 5;
  const auto flat5 = ModelManifold::euclidean(n);
  const auto sq5 = ScalarField::radial_distance_squared_half(n);
  const auto q = cart({0.4, 0.3, -0.5, 0.2, 0.6});
  const double rho = norm(q.coords);
  for (int r = 0; r < n; ++r)
    CHECK(level_mean_curvature(sq5, flat5, q, r) ==
          doctest::Approx(algebra::binomial(n - 1, r) / std::pow(rho, r)).epsilon(1e-12));
}

TEST_CASE("degenerate gradient is refused") {
  SymMatrix q = SymMatrix::identity(3);
  const auto u = ScalarField::quadratic_form(q);
  const auto m = ModelManifold::euclidean(3);
  const auto h = hessian_frame(u, m, cart({0, 0, 0}));
  CHECK_THROWS_AS(principal_frame(h), Error);
  try {
    principal_frame(h);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGradient);
  }
}

TEST_CASE("second Reilly identity holds pointwise") {
  verify::CaseRng rng(61, 5);
  for (int n : {2, 3, 4, 5})
    for (const auto& m : models(n))
      for (const auto& u : fields(n))
        for (int k = 0; k < 10; ++k) {
          const auto p = cart(random_point(rng, n));
          for (int r = 0; r < n; ++r) {
            const auto c = reilly2_check(u, m, p, r);
            CHECK(c.residual <= 1e-8 * std::max(1.0, c.scale));
          }
        }
}

TEST_CASE("divergence of Newton operators") {
  verify::CaseRng rng(71, 6);
  const auto flat = ModelManifold::euclidean(4);
  for (const auto& u : fields(4)) {
    const auto p = cart(random_point(rng, 4));
    for (int r = 1; r < 4; ++r) CHECK(max_abs(div_newton_frame(u, flat, p, r)) <= 1e-12);
  }
  const auto m = ModelManifold::warped(WarpingProfile::poly3(), 3);
  for (const auto& u : fields(3)) {
    const auto p = cart(random_point(rng, 3));
    for (int r = 1; r < 3; ++r) {
      const Vector exact = div_newton_frame(u, m, p, r);
      const double h = 1e-2 * (1 + norm(p.coords));
      const double e1 = max_abs(div_newton_finite_difference(u, m, p, r, h) - exact);
      const double e2 = max_abs(div_newton_finite_difference(u, m, p, r, h / 2) - exact);
      if (e1 < 1e-9) continue;
      CHECK(std::log2(e1 / e2) >= 1.9);
    }
  }
}

TEST_CASE("first Reilly identity") {
  const auto flat = ModelManifold::euclidean(3);
  const auto sq = ScalarField::radial_distance_squared_half(3);
  CHECK(reilly1_residual(sq, flat, cart({0.6, -0.2, 0.7}), 1, 1e-3) < 1e-5);

  verify::CaseRng rng(81, 7);
  for (int n : {3, 4})
    for (const auto& m : models(n))
      for (const auto& u : fields(n)) {
        const auto p = cart(random_point(rng, n));
        for (int r = 1; r < n; ++r) {
          CHECK(reilly1_residual(u, m, p, r, 1e-4) < 1e-5);
          const double h = 5e-3 * (1 + norm(p.coords));
          const double e1 = reilly1_residual(u, m, p, r, h);
          const double e2 = reilly1_residual(u, m, p, r, h / 2);
          if (e1 < 1e-9) continue;
          CHECK(std::log2(e1 / e2) >= 1.9);
        }
      }
}

TEST_CASE("off-pole radial fields are Euclidean only") {
  const auto u = ScalarField::radial_distance(3, Vector{0.2, 0, 0});
  CHECK_NOTHROW(u.check_compatible(ModelManifold::euclidean(3)));
  CHECK_THROWS_AS(u.check_compatible(ModelManifold::constant_curvature(-1.0, 3)), Error);
  CHECK_THROWS_AS(ScalarField::radial_distance(3).check_compatible(ModelManifold::euclidean(4)),
                  Error);
}
