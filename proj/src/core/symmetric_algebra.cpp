#include "symmetric_algebra.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace curvatura::algebra {

namespace {

void check_order(const SymMatrix& h, int r) {
  require(r >= 0, ErrorKind::Argument, "order r must be nonnegative");
  require(r <= h.dim(), ErrorKind::Argument, "order r exceeds matrix dimension");
}

// Sorted index subsets of {0..n-1} with `size` elements, encoded as bitmasks.
std::vector<unsigned> subsets_of_size(int n, int size, unsigned excluded = 0) {
  std::vector<unsigned> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (std::popcount(mask) == size && (mask & excluded) == 0) out.push_back(mask);
  return out;
}

int unpack(unsigned mask, int n, int* indices) {
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) indices[count++] = i;
  return count;
}

}  // namespace

double sigma_elementary(std::span<const double> x, int r) {
  require(r >= 0, ErrorKind::Argument, "sigma_r requires r >= 0");
  const int k = static_cast<int>(x.size());
  if (r > k) return 0.0;
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = std::min(i + 1, r); j >= 1; --j) e[j] += x[i] * e[j - 1];
  return e[r];
}

int kronecker_delta(std::span<const int> upper, std::span<const int> lower) {
  require(upper.size() == lower.size(), ErrorKind::Argument,
          "Kronecker delta index lists differ in length");
  require(upper.size() <= static_cast<std::size_t>(kMaxDim), ErrorKind::Argument,
          "Kronecker delta supports at most 8 indices");
  const int m = static_cast<int>(upper.size());
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (upper[a] == upper[b]) return 0;

  // Position of each lower index inside `upper`; lower must be a permutation.
  std::array<int, kMaxDim> perm{};
  for (int a = 0; a < m; ++a) {
    const auto it = std::find(upper.begin(), upper.end(), lower[a]);
    if (it == upper.end()) return 0;
    perm[a] = static_cast<int>(it - upper.begin());
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (perm[a] == perm[b]) return 0;

  int sign = 1;
  std::array<bool, kMaxDim> seen{};
  for (int a = 0; a < m; ++a) {
    if (seen[a]) continue;
    int length = 0;
    for (int b = a; !seen[b]; b = perm[b]) {
      seen[b] = true;
      ++length;
    }
    if (length % 2 == 0) sign = -sign;
  }
  return sign;
}

double sigma_hessian_eigen(const SymMatrix& h, int r) {
  check_order(h, r);
  if (r == 0) return 1.0;
  const EigenSystem eig = jacobi_eigen(h);
  return sigma_elementary(eig.values.span(), r);
}

double sigma_hessian(const SymMatrix& h, int r) { return sigma_hessian_eigen(h, r); }

double sigma_hessian_delta(const SymMatrix& h, int r) {
  check_order(h, r);
  if (r == 0) return 1.0;
  const int n = h.dim();
  double total = 0.0;
  std::array<int, kMaxDim> upper{};
  std::array<int, kMaxDim> lower{};
  std::array<int, kMaxDim> perm{};
  for (unsigned mask : subsets_of_size(n, r)) {
    unpack(mask, n, upper.data());
    std::iota(perm.begin(), perm.begin() + r, 0);
    do {
      for (int k = 0; k < r; ++k) lower[k] = upper[perm[k]];
      const int delta = kronecker_delta(std::span<const int>(upper.data(), r),
                                        std::span<const int>(lower.data(), r));
      double product = delta;
      for (int k = 0; k < r && product != 0.0; ++k) product *= h(upper[k], lower[k]);
      total += product;
    } while (std::next_permutation(perm.begin(), perm.begin() + r));
  }
  return total;
}

NewtonOperator newton_operator(const SymMatrix& h, int r) {
  check_order(h, r);
  const int n = h.dim();
  const EigenSystem eig = jacobi_eigen(h);
  Matrix t = Matrix::identity(n);
  for (int k = 1; k <= r; ++k) {
    const double sigma = sigma_elementary(eig.values.span(), k);
    t = sigma * Matrix::identity(n) - t * h.matrix();
  }
  return {r, SymMatrix::from(t)};
}

SymMatrix newton_operator_power_sum(const SymMatrix& h, int r) {
  check_order(h, r);
  const int n = h.dim();
  const EigenSystem eig = jacobi_eigen(h);
  // powers[k] = h^k
  std::vector<Matrix> powers{Matrix::identity(n)};
  for (int k = 1; k <= r; ++k) powers.push_back(powers.back() * h.matrix());
  Matrix t(n);
  for (int i = 0; i <= r; ++i) {
    const double sign = (r - i) % 2 == 0 ? 1.0 : -1.0;
    t = t + (sign * sigma_elementary(eig.values.span(), i)) * powers[r - i];
  }
  return SymMatrix::from(t);
}

SymMatrix newton_partial_form(const SymMatrix& h, int r) {
  check_order(h, r);
  const int n = h.dim();
  require(n <= 6, ErrorKind::Capability,
          "Kronecker contraction for T_r is limited to n <= 6");
  SymMatrix t(n);
  std::array<int, kMaxDim> upper{};
  std::array<int, kMaxDim> lower{};
  std::array<int, kMaxDim> perm{};
  const int m = r + 1;
  for (int i = 0; i < n; ++i) {
    std::array<double, kMaxDim> row{};
    for (unsigned mask : subsets_of_size(n, r, 1u << i)) {
      upper[0] = i;
      unpack(mask, n, upper.data() + 1);
      std::iota(perm.begin(), perm.begin() + m, 0);
      do {
        for (int k = 0; k < m; ++k) lower[k] = upper[perm[k]];
        const int delta = kronecker_delta(std::span<const int>(upper.data(), m),
                                          std::span<const int>(lower.data(), m));
        double product = delta;
        for (int k = 1; k < m && product != 0.0; ++k) product *= h(upper[k], lower[k]);
        row[lower[0]] += product;
      } while (std::next_permutation(perm.begin(), perm.begin() + m));
    }
    for (int j = i; j < n; ++j) t.set(i, j, row[j]);
  }
  return t;
}

double trace_identity_residual(const SymMatrix& h, int r) {
  require(r >= 0 && r <= h.dim() - 1, ErrorKind::Argument,
          "trace identity needs 0 <= r <= n-1");
  const NewtonOperator t = newton_operator(h, r);
  const double lhs = trace(t.matrix.matrix() * h.matrix());
  const double rhs = (r + 1) * sigma_hessian_eigen(h, r + 1);
  return std::abs(lhs - rhs);
}

Matrix newton_operator_general(const Matrix& a, int r) {
  require(r >= 0 && r <= a.dim(), ErrorKind::Argument, "order r out of range");
  const int n = a.dim();
  Matrix t = Matrix::identity(n);
  for (int k = 1; k <= r; ++k) {
    const Matrix ta = t * a;
    const double sigma = trace(ta) / k;
    t = sigma * Matrix::identity(n) - ta;
  }
  return t;
}

std::int64_t double_factorial(int k) {
  std::int64_t result = 1;
  for (int i = k; i > 0; i -= 2) result *= i;
  return result;
}

std::int64_t factorial(int k) {
  std::int64_t result = 1;
  for (int i = 2; i <= k; ++i) result *= i;
  return result;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace curvatura::algebra
