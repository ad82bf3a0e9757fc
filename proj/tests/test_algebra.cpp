#include <cmath>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "symmetric_algebra.hpp"
#include "verification.hpp"

using namespace curvatura;
using namespace curvatura::algebra;

namespace {

SymMatrix diag(std::initializer_list<double> d) { return SymMatrix::diagonal(Vector(d)); }

SymMatrix random_symmetric(verify::CaseRng& rng, int n) {
  SymMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) h.set(i, j, rng.uniform(-2.0, 2.0));
  return h;
}

double max_diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("sigma_elementary small cases") {
  const std::vector<double> x{1, 2, 3};
  CHECK(sigma_elementary(x, 0) == 1.0);
  CHECK(sigma_elementary(x, 1) == 6.0);
  CHECK(sigma_elementary(x, 2) == 11.0);
  CHECK(sigma_elementary(x, 3) == 6.0);
  const std::vector<double> y{5, 7};
  CHECK(sigma_elementary(y, 0) == 1.0);
  CHECK(sigma_elementary(y, 3) == 0.0);
  CHECK(sigma_elementary(std::vector<double>{}, 0) == 1.0);
}

TEST_CASE("kronecker delta signs") {
  const std::vector<int> up{0, 1, 2};
  CHECK(kronecker_delta(up, std::vector<int>{0, 1, 2}) == 1);
  CHECK(kronecker_delta(up, std::vector<int>{1, 0, 2}) == -1);
  CHECK(kronecker_delta(up, std::vector<int>{1, 2, 0}) == 1);
  CHECK(kronecker_delta(up, std::vector<int>{0, 1, 3}) == 0);
  CHECK(kronecker_delta(std::vector<int>{0, 0}, std::vector<int>{0, 0}) == 0);
  CHECK(kronecker_delta(std::vector<int>{}, std::vector<int>{}) == 1);
}

TEST_CASE("sigma of a Hessian through both routes") {
  CHECK(sigma_hessian(diag({1, 2, 3}), 2) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(sigma_hessian_delta(diag({1, 2, 3}), 2) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(sigma_hessian(diag({1, 2, 3}), 0) == 1.0);
  CHECK_THROWS_AS(sigma_hessian(diag({1, 2, 3}), 4), Error);

  verify::CaseRng rng(7, 1);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 20; ++k) {
      const auto h = random_symmetric(rng, n);
      for (int r = 0; r <= n; ++r) {
        const double a = sigma_hessian_eigen(h, r), b = sigma_hessian_delta(h, r);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)) * std::pow(2.0 * n, r));
      }
    }
}

TEST_CASE("Newton operators") {
  const auto t1 = newton_operator(diag({2, 3}), 1);
  CHECK(t1.order == 1);
  CHECK(max_diff(t1.matrix.matrix(), diag({3, 2}).matrix()) < 1e-15);

  // sigma_2(I_3) = 3, sigma_1 = 3: T_2 = 3I - (3I - I) I = I
  const auto t2 = newton_operator(SymMatrix::identity(3), 2);
  CHECK(max_diff(t2.matrix.matrix(), Matrix::identity(3)) < 1e-15);

  CHECK(max_diff(newton_operator(diag({1, 2, 3}), 0).matrix.matrix(), Matrix::identity(3)) == 0.0);
}

TEST_CASE("Newton operator routes agree on random matrices") {
  verify::CaseRng rng(11, 2);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 10; ++k) {
      const auto h = random_symmetric(rng, n);
      for (int r = 0; r < n; ++r) {
        const Matrix rec = newton_operator(h, r).matrix.matrix();
        const double scale = std::max(1.0, max_abs(rec));
        CHECK(max_diff(rec, newton_operator_power_sum(h, r).matrix()) < 1e-10 * scale);
        CHECK(max_diff(rec, newton_partial_form(h, r).matrix()) < 1e-10 * scale);
        CHECK(max_diff(rec, newton_operator_general(h.matrix(), r)) < 1e-9 * scale);
        CHECK(trace_identity_residual(h, r) < 1e-10 * std::max(1.0, scale * max_abs(h.matrix())));
      }
    }
}

TEST_CASE("power-sum form has alternating sign starting at H^r") {
  // T_1 = sigma_1 I - H for any H; an odd r catches a reversed sign.
  const auto h = diag({1, 4, 9});
  const Matrix t1 = newton_operator_power_sum(h, 1).matrix();
  CHECK(max_diff(t1, diag({13, 10, 5}).matrix()) < 1e-14);
}

TEST_CASE("Cayley-Hamilton and cofactor") {
  verify::CaseRng rng(5, 3);
  for (int n = 2; n <= 6; ++n) {
    const auto h = random_symmetric(rng, n);
    const Matrix tn = newton_operator(h, n).matrix.matrix();
    CHECK(max_abs(tn) < 1e-9 * std::pow(std::max(1.0, max_abs(h.matrix())), n) * n);
    // T_{n-1} is the cofactor (adjugate) of H
    const Matrix adj = newton_operator(h, n - 1).matrix.matrix();
    const Matrix prod = adj * h.matrix();
    const double det = determinant(h.matrix());
    CHECK(max_diff(prod, det * Matrix::identity(n)) <
          1e-9 * std::max(1.0, std::pow(max_abs(h.matrix()), n)) * n);
  }
}

TEST_CASE("partial form rejects dimensions above 6") {
  CHECK_THROWS_AS(newton_partial_form(SymMatrix::identity(7), 2), Error);
}

TEST_CASE("double factorial and binomials") {
  CHECK(double_factorial(5) == 15);
  CHECK(double_factorial(6) == 48);
  CHECK(double_factorial(1) == 1);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(-1) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 0) == 1);
  CHECK(binomial(3, 4) == 0);
  CHECK(factorial(5) == 120);
}
