#pragma once

// Elementary symmetric functions, generalized Kronecker deltas and Newton
// operators of small symmetric matrices.
//
// sigma_r and the Newton operators T_r are available through two unrelated
// routes each (eigenvalues vs. explicit Kronecker contraction, recursion vs.
// power sum), so that one route can serve as the oracle for the other.

#include <cstdint>
#include <span>

#include "linalg.hpp"

namespace curvatura::algebra {

/// sum over i1 < ... < ir of x_i1 ... x_ir. sigma_0 = 1, sigma_r = 0 for r > k.
/// Evaluated through the coefficients of prod (t + x_i), O(k^2).
double sigma_elementary(std::span<const double> x, int r);

/// Generalized Kronecker delta: +1 / -1 when `upper` holds distinct indices and
/// `lower` is an even / odd permutation of it, 0 otherwise.
int kronecker_delta(std::span<const int> upper, std::span<const int> lower);

/// sigma_r of the eigenvalues of h (Jacobi eigenvalues then sigma_elementary).
double sigma_hessian(const SymMatrix& h, int r);
double sigma_hessian_eigen(const SymMatrix& h, int r);
/// (1/r!) delta^{i1..ir}_{j1..jr} h_{i1 j1} ... h_{ir jr}, iterating r-subsets
/// for the upper indices and permutations for the lower ones. The r! orderings
/// of each subset contribute equally, which cancels the 1/r!. Cost is
/// C(n,r) * r! * r^2; for n <= 8 this stays below 1e6 products.
double sigma_hessian_delta(const SymMatrix& h, int r);

struct NewtonOperator {
  int order = 0;
  SymMatrix matrix;
};

/// T_0 = I, T_r = sigma_r(h) I - T_{r-1} h.
NewtonOperator newton_operator(const SymMatrix& h, int r);
/// sum_{i=0}^r (-1)^{r-i} sigma_i(h) h^{r-i}; same operator, second route.
SymMatrix newton_operator_power_sum(const SymMatrix& h, int r);
/// (T_r)_ij = (1/r!) delta^{i i1..ir}_{j j1..jr} h_{i1 j1} ... h_{ir jr}.
/// Capability error for n > 6.
SymMatrix newton_partial_form(const SymMatrix& h, int r);

/// |trace(T_r h) - (r+1) sigma_{r+1}(h)|
double trace_identity_residual(const SymMatrix& h, int r);

/// Newton operators of a general (not necessarily symmetric) matrix, with the
/// sigma_k taken from the characteristic polynomial (Faddeev-LeVerrier). Used
/// for the mixed-index form A = g^{-1} H of a Hessian in a chart.
Matrix newton_operator_general(const Matrix& a, int r);

/// k!! for k >= 1; 1 for k <= 0.
std::int64_t double_factorial(int k);
std::int64_t binomial(int n, int k);
std::int64_t factorial(int k);

}  // namespace curvatura::algebra
