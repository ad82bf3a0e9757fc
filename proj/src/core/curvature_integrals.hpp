#pragma once

// Global quantities built from the level-set geometry: total mean curvatures
// M_r of level sets, both sides of the comparison formula
//
//   M_r(G) - M_r(g) = (r+1) int sigma_{r+1}(k)
//       + int ( - sum k_{i1}..k_{i(r-1)} K_{ir n}
//               + (1/|grad u|) sum k_{i1}..k_{i(r-2)} |grad u|_{i(r-1)} R_{ir i(r-1) ir n} ),
//
// its constant-curvature and Ricci specializations, and the closed-form
// sphere and ball quantities used to check them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace curvatura::integrals {

using levelset::ScalarField;
using manifold::ModelManifold;
using quadrature::QuadratureSpec;

struct MeanCurvatureReport {
  int r = 0;
  double value = 0.0;
  double error_estimate = 0.0;
  std::string descriptor;
  std::int64_t node_count = 0;
};

/// r in [0, n-1]: surface integral of sigma_r over {u = level}; r = -1: the
/// volume of {u < level}.
MeanCurvatureReport total_mean_curvature(const ScalarField& u, const ModelManifold& m,
                                         double level, int r, const QuadratureSpec& spec);

struct ComparisonBreakdown {
  double lhs = 0.0;             // M_r(outer) - M_r(inner)
  double term_principal = 0.0;  // (r+1) int sigma_{r+1}
  double term_sectional = 0.0;
  double term_mixed = 0.0;
  double residual = 0.0;        // lhs - (principal + sectional + mixed)
  double error_budget = 0.0;
  std::int64_t node_count = 0;
  // Integrated absolute gap between the index-set sums and the full delta
  // contraction of div(T_r); zero when not evaluated.
  double contraction_gap = 0.0;
  double outer_value = 0.0;     // M_r(outer)

  double rhs() const { return term_principal + term_sectional + term_mixed; }
  /// max(|lhs|, |principal| + |sectional| + |mixed|, |M_r(outer)|); the last
  /// keeps the scale meaningful when every term vanishes (Gauss-Bonnet).
  double scale() const;
  double relative_residual() const;
};

/// Index tuples of the two correction sums for a given (n, r); indices are
/// 0-based principal directions in [0, n-2].
struct CorrectionIndexSets {
  struct First {
    std::vector<int> ascending;  // i_1 < .. < i_{r-1}
    int last;                    // i_r
  };
  struct Second {
    std::vector<int> ascending;  // i_1 < .. < i_{r-2}
    int pivot;                   // i_{r-1}
    int last;                    // i_r
  };
  std::vector<First> first;
  std::vector<Second> second;
};

/// Cached per (n, r).
const CorrectionIndexSets& correction_index_sets(int n, int r);

/// Pointwise integrand of the comparison formula at a chart point:
/// {principal, sectional, mixed, contraction gap}.
std::array<double, 4> comparison_integrand(const ScalarField& u, const ModelManifold& m,
                                           const manifold::ChartPoint& p, int r);

ComparisonBreakdown comparison_rhs(const ScalarField& u, const ModelManifold& m, double c1,
                                   double c2, int r, const QuadratureSpec& spec);

/// Two-term form (r+1) int sigma_{r+1} - a (n-r) int sigma_{r-1}; constant
/// curvature (or Euclidean) models only.
ComparisonBreakdown comparison_rhs_constant(const ScalarField& u, const ModelManifold& m,
                                            double c1, double c2, int r,
                                            const QuadratureSpec& spec);

/// r = 1 form 2 int sigma_2 - int Ric(nu).
ComparisonBreakdown ricci_comparison(const ScalarField& u, const ModelManifold& m, double c1,
                                     double c2, const QuadratureSpec& spec);

/// M_{n-1} = |S^{n-1}| - sum_i ((2i-1)!!(n-2i-2)!!/(n-2)!!) a^i M_{n-2i-1},
/// with M_{-1} the enclosed volume. Throws Argument when an input is missing.
double solanes_prediction(const std::map<int, double>& lower, double a, int n);

/// M_r of the geodesic sphere of radius rho in the constant-curvature model a.
double ball_bound(int r, double rho, double a, int n);

struct VolumeBound {
  double general = 0.0;              // -(n-1) a vol
  std::optional<double> dim3;        // -4 a vol when n = 3
};
VolumeBound m1_volume_bound(double a, double vol, int n);

}  // namespace curvatura::integrals
