#pragma once

// Scalar fields on the model spaces, their covariant Hessians in orthonormal
// frames, and the principal curvature frame of their level sets.
//
// Fields are defined in the normal-coordinate (Cartesian) chart. Analytic
// chart derivatives exist there for every field kind; in the geodesic polar
// chart only the radial kinds have them and the rest fall back to central
// differences of u composed with the polar map.

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "model_manifolds.hpp"

namespace curvatura::levelset {

using manifold::ChartPoint;
using manifold::ModelManifold;

inline constexpr double kDefaultGradientCutoff = 1e-8;

enum class FieldKind {
  RadialDistance,             // geodesic distance to the center
  RadialDistanceSquaredHalf,  // half the squared distance
  QuadraticForm,              // x^T Q x / 2 in the normal chart
  OffCenterDistance,          // chart distance |x - c| to an offset center
};

struct FieldJet {
  double value = 0.0;
  Vector grad;  // chart partials du/dx^i
  Matrix hess;  // chart partials d2u/dx^i dx^j
};

class ScalarField {
 public:
  /// `center` is only honored in Euclidean space; curved models require the pole.
  static ScalarField radial_distance(int dim, Vector center = {});
  static ScalarField radial_distance_squared_half(int dim, Vector center = {});
  /// Q must be symmetric positive definite so that the levels are ellipsoids.
  static ScalarField quadratic_form(const SymMatrix& q);
  static ScalarField off_center_distance(const Vector& center);

  FieldKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return center_.size(); }
  const Vector& center() const noexcept { return center_; }
  const SymMatrix& quadratic() const noexcept { return q_; }
  std::string label() const;

  /// Geodesic distance to the pole for both radial kinds; those fields have
  /// geodesic spheres as level sets.
  bool is_radial_about_pole() const;
  /// Convert a level value to the geodesic radius of the level sphere (radial kinds only).
  double level_to_radius(double level) const;
  double radius_to_level(double radius) const;

  /// Rejects combinations without a closed form (off-pole radial fields in curved models).
  void check_compatible(const ModelManifold& m) const;

  double value(const ChartPoint& p) const;
  /// Chart-space first and second partials when a closed form exists.
  std::optional<FieldJet> analytic_jet(const ChartPoint& p) const;
  FieldJet finite_difference_jet(const ChartPoint& p, double h) const;

 private:
  ScalarField(FieldKind kind, Vector center, SymMatrix q);
  double value_cartesian(const Vector& x) const;
  FieldJet jet_cartesian(const Vector& x) const;

  FieldKind kind_;
  Vector center_;
  SymMatrix q_;
};

enum class Derivatives { Auto, Analytic, FiniteDifference };

struct HessianData {
  ChartPoint point;
  double value = 0.0;
  Vector grad_chart;     // chart components of the gradient vector g^{-1} du
  Vector grad_frame;     // gradient in the orthonormal frame
  double grad_norm = 0.0;
  SymMatrix hess_frame;  // covariant Hessian in the orthonormal frame
  Matrix frame;          // column a = chart components of E_a (E = L^{-T}, g = L L^T)
  Matrix frame_inverse;  // L^T: chart vector -> frame components
};

/// Default central-difference step 1e-4 (1 + |p|).
double default_step(const ChartPoint& p);

HessianData hessian_frame(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                          Derivatives mode = Derivatives::Auto, double h = 0.0);

struct PrincipalFrameData {
  Vector kappa;             // ascending principal curvatures of the level set
  Matrix basis;             // orthonormal-frame components: columns 0..n-2 principal
                            // directions, column n-1 the unit normal
  Vector grad_norm_derivs;  // |grad u|_i = u_{in}, i < n
  double normal_second = 0.0;  // u_{nn}
  double grad_norm = 0.0;

  Vector direction(int i) const { return basis.column(i); }
  Vector nu() const { return basis.column(basis.dim() - 1); }
};

/// Throws DegenerateGradient when |grad u| <= eps_grad.
PrincipalFrameData principal_frame(const HessianData& h, double eps_grad = kDefaultGradientCutoff);

/// Chart components of a vector given in the orthonormal frame of h.
Vector frame_to_chart(const HessianData& h, const Vector& w);

/// Components of d/dr in the principal frame (zero at the pole).
Vector radial_in_principal_frame(const HessianData& h, const PrincipalFrameData& pf,
                                 const manifold::PointCurvature& c);

double level_mean_curvature(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                            int r);

struct Reilly2Check {
  double sigma = 0.0;      // sigma_r(kappa)
  double quotient = 0.0;   // <T_r grad u, grad u> / |grad u|^{r+2}
  double residual = 0.0;
  double scale = 0.0;      // magnitude of the summed terms, for relative comparisons
};

Reilly2Check reilly2_check(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                           int r);
double reilly2_residual(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r);

/// div(T_r) in the orthonormal frame of `h` from the curvature contraction
/// (1/(r-1)!) delta^{i i1..ir}_{j j1..jr} u_{i1j1}..u_{i(r-1)j(r-1)} R_{i jr ir k} u_k.
/// Returns zero for r = 0.
Vector div_newton_contracted(const HessianData& h, const manifold::RiemannTensor& riemann, int r);
Vector div_newton_frame(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r);

/// div(T_r) from central differences of the chart components of T_r,
/// (div T)_j = d_i T^i_j + Gamma^i_ik T^k_j - Gamma^k_ij T^i_k, expressed in
/// the same orthonormal frame as hessian_frame. Needs analytic field jets.
Vector div_newton_finite_difference(const ScalarField& u, const ModelManifold& m,
                                    const ChartPoint& p, int r, double h);

/// |div(T_{r-1}(grad u/|grad u|^r)) - <div T_{r-1}, grad u>/|grad u|^r
///   - r <T_r grad u, grad u>/|grad u|^{r+2}|, the divergence on the left taken
/// by central differences of step h.
double reilly1_residual(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r,
                        double h);

}  // namespace curvatura::levelset
