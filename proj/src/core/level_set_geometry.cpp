#include "level_set_geometry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "symmetric_algebra.hpp"

namespace curvatura::levelset {

using manifold::Chart;
using manifold::Family;

namespace {

Vector zero_if_empty(Vector c, int dim) { return c.size() == 0 ? Vector(dim) : c; }

ChartPoint shifted(const ChartPoint& p, int axis, double step) {
  ChartPoint q = p;
  q.coords[axis] += step;
  return q;
}

// Chart (1,1) form A^i_j = g^{ik} H_kj of the covariant Hessian at p.
struct ChartHessian {
  Vector du;
  Matrix mixed;
  Matrix ginv;
};

ChartHessian chart_hessian(const ScalarField& u, const ModelManifold& m, const ChartPoint& p) {
  const auto jet = u.analytic_jet(p);
  if (!jet)
    fail(ErrorKind::Capability,
         "finite-difference divergence needs analytic field derivatives in this chart");
  const int n = m.dim();
  const auto gamma = manifold::christoffel_at(m, p);
  Matrix cov = jet->hess;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) cov(i, j) -= gamma(k, i, j) * jet->grad[k];
  ChartHessian out{jet->grad, Matrix(n), manifold::inverse_metric_at(m, p)};
  out.mixed = out.ginv * cov;
  return out;
}

}  // namespace

ScalarField::ScalarField(FieldKind kind, Vector center, SymMatrix q)
    : kind_(kind), center_(center), q_(std::move(q)) {
  require(center_.size() >= 2 && center_.size() <= 6, ErrorKind::Argument,
          "field dimension must be in [2, 6]");
}

ScalarField ScalarField::radial_distance(int dim, Vector center) {
  return ScalarField(FieldKind::RadialDistance, zero_if_empty(center, dim), SymMatrix(dim));
}

ScalarField ScalarField::radial_distance_squared_half(int dim, Vector center) {
  return ScalarField(FieldKind::RadialDistanceSquaredHalf, zero_if_empty(center, dim),
                     SymMatrix(dim));
}

ScalarField ScalarField::quadratic_form(const SymMatrix& q) {
  const auto eig = jacobi_eigen(q);
  require(eig.values[0] > 0.0, ErrorKind::Argument, "quadratic form must be positive definite");
  return ScalarField(FieldKind::QuadraticForm, Vector(q.dim()), q);
}

ScalarField ScalarField::off_center_distance(const Vector& center) {
  return ScalarField(FieldKind::OffCenterDistance, center, SymMatrix(center.size()));
}

std::string ScalarField::label() const {
  switch (kind_) {
    case FieldKind::RadialDistance: return "radial";
    case FieldKind::RadialDistanceSquaredHalf: return "radial_sq";
    case FieldKind::QuadraticForm: return "quadratic";
    case FieldKind::OffCenterDistance: return "offcenter";
  }
  return "unknown";
}

bool ScalarField::is_radial_about_pole() const {
  return (kind_ == FieldKind::RadialDistance || kind_ == FieldKind::RadialDistanceSquaredHalf) &&
         max_abs(center_) == 0.0;
}

double ScalarField::level_to_radius(double level) const {
  require(is_radial_about_pole(), ErrorKind::Argument, "field is not radial about the pole");
  return kind_ == FieldKind::RadialDistance ? level : std::sqrt(2.0 * level);
}

double ScalarField::radius_to_level(double radius) const {
  require(is_radial_about_pole(), ErrorKind::Argument, "field is not radial about the pole");
  return kind_ == FieldKind::RadialDistance ? radius : 0.5 * radius * radius;
}

void ScalarField::check_compatible(const ModelManifold& m) const {
  require(m.dim() == dim(), ErrorKind::Argument, "field and manifold dimensions differ");
  const bool radial =
      kind_ == FieldKind::RadialDistance || kind_ == FieldKind::RadialDistanceSquaredHalf;
  if (radial && m.family() != Family::Euclidean && max_abs(center_) != 0.0)
    fail(ErrorKind::Capability,
         "radial fields about points other than the pole are only available in Euclidean space");
}

double ScalarField::value_cartesian(const Vector& x) const {
  switch (kind_) {
    case FieldKind::RadialDistance:
    case FieldKind::OffCenterDistance:
      return norm(x - center_);
    case FieldKind::RadialDistanceSquaredHalf: {
      const Vector d = x - center_;
      return 0.5 * dot(d, d);
    }
    case FieldKind::QuadraticForm:
      return 0.5 * dot(x, q_.matrix() * x);
  }
  return 0.0;
}

FieldJet ScalarField::jet_cartesian(const Vector& x) const {
  const int n = dim();
  FieldJet jet{value_cartesian(x), Vector(n), Matrix(n)};
  switch (kind_) {
    case FieldKind::RadialDistance:
    case FieldKind::OffCenterDistance: {
      const Vector d = x - center_;
      const double len = norm(d);
      if (len == 0.0) fail(ErrorKind::DegenerateGradient, "distance field is singular at its center");
      const Vector unit = (1.0 / len) * d;
      jet.grad = unit;
      jet.hess = (1.0 / len) * (Matrix::identity(n) - outer(unit, unit));
      break;
    }
    case FieldKind::RadialDistanceSquaredHalf:
      jet.grad = x - center_;
      jet.hess = Matrix::identity(n);
      break;
    case FieldKind::QuadraticForm:
      jet.grad = q_.matrix() * x;
      jet.hess = q_.matrix();
      break;
  }
  return jet;
}

double ScalarField::value(const ChartPoint& p) const {
  require(p.coords.size() == dim(), ErrorKind::Argument, "chart point has wrong dimension");
  if (p.chart == Chart::GeodesicPolar) return value_cartesian(manifold::polar_to_cartesian(p.coords));
  return value_cartesian(p.coords);
}

std::optional<FieldJet> ScalarField::analytic_jet(const ChartPoint& p) const {
  require(p.coords.size() == dim(), ErrorKind::Argument, "chart point has wrong dimension");
  if (p.chart == Chart::Cartesian) return jet_cartesian(p.coords);
  if (!is_radial_about_pole()) return std::nullopt;
  const int n = dim();
  const double r = p.coords[0];
  FieldJet jet{value(p), Vector(n), Matrix(n)};
  if (kind_ == FieldKind::RadialDistance) {
    jet.grad[0] = 1.0;
  } else {
    jet.grad[0] = r;
    jet.hess(0, 0) = 1.0;
  }
  return jet;
}

FieldJet ScalarField::finite_difference_jet(const ChartPoint& p, double h) const {
  const int n = dim();
  FieldJet jet{value(p), Vector(n), Matrix(n)};
  for (int i = 0; i < n; ++i) {
    const double up = value(shifted(p, i, h));
    const double down = value(shifted(p, i, -h));
    jet.grad[i] = (up - down) / (2.0 * h);
    jet.hess(i, i) = (up - 2.0 * jet.value + down) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      const double pp = value(shifted(shifted(p, i, h), j, h));
      const double pm = value(shifted(shifted(p, i, h), j, -h));
      const double mp = value(shifted(shifted(p, i, -h), j, h));
      const double mm = value(shifted(shifted(p, i, -h), j, -h));
      jet.hess(i, j) = jet.hess(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return jet;
}

double default_step(const ChartPoint& p) { return 1e-4 * (1.0 + norm(p.coords)); }

HessianData hessian_frame(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                          Derivatives mode, double h) {
  const int n = m.dim();
  std::optional<FieldJet> jet;
  if (mode != Derivatives::FiniteDifference) jet = u.analytic_jet(p);
  if (!jet) {
    if (mode == Derivatives::Analytic)
      fail(ErrorKind::Capability, "field has no analytic derivatives in this chart");
    jet = u.finite_difference_jet(p, h > 0.0 ? h : default_step(p));
  }

  const Matrix g = manifold::metric_at(m, p);
  const auto gamma = manifold::christoffel_at(m, p);
  Matrix cov = jet->hess;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gamma(k, i, j) * jet->grad[k];
      cov(i, j) -= s;
    }

  const Matrix l = cholesky_lower(g);
  const Matrix linv = lower_triangular_inverse(l);

  HessianData out;
  out.point = p;
  out.value = jet->value;
  out.grad_frame = linv * jet->grad;
  out.grad_norm = norm(out.grad_frame);
  out.grad_chart = transpose(linv) * out.grad_frame;
  out.hess_frame = SymMatrix::from(linv * cov * transpose(linv));
  out.frame = transpose(linv);
  out.frame_inverse = transpose(l);
  return out;
}

PrincipalFrameData principal_frame(const HessianData& h, double eps_grad) {
  const int n = h.hess_frame.dim();
  if (!(h.grad_norm > eps_grad)) {
    std::ostringstream msg;
    msg << "degenerate gradient |grad u| = " << h.grad_norm << " at chart point (";
    for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << h.point.coords[i];
    msg << ")";
    fail(ErrorKind::DegenerateGradient, msg.str());
  }
  const Vector nu = (1.0 / h.grad_norm) * h.grad_frame;

  // Householder reflection taking e_n to +-nu; its first n-1 columns span nu^perp.
  Vector v = Vector::unit(n, n - 1);
  const double sign = nu[n - 1] >= 0.0 ? 1.0 : -1.0;
  v[n - 1] += sign * nu[n - 1];
  for (int i = 0; i < n - 1; ++i) v[i] = sign * nu[i];
  // v = e_n + sign*nu, reflection maps e_n -> -sign*nu.
  const double vv = dot(v, v);
  Matrix reflect = Matrix::identity(n) - (2.0 / vv) * outer(v, v);

  SymMatrix shape(n - 1);
  const Matrix& hf = h.hess_frame.matrix();
  for (int a = 0; a < n - 1; ++a)
    for (int b = a; b < n - 1; ++b) {
      const Vector ea = reflect.column(a);
      const Vector eb = reflect.column(b);
      shape.set(a, b, dot(ea, hf * eb) / h.grad_norm);
    }
  const EigenSystem eig = jacobi_eigen(shape);

  PrincipalFrameData out;
  out.kappa = eig.values;
  out.basis = Matrix(n);
  out.grad_norm = h.grad_norm;
  for (int i = 0; i < n - 1; ++i) {
    Vector d(n);
    for (int a = 0; a < n - 1; ++a) d = d + eig.vectors(a, i) * reflect.column(a);
    out.basis.set_column(i, d);
  }
  out.basis.set_column(n - 1, nu);

  const Vector hnu = hf * nu;
  out.grad_norm_derivs = Vector(n - 1);
  for (int i = 0; i < n - 1; ++i) out.grad_norm_derivs[i] = dot(out.direction(i), hnu);
  out.normal_second = dot(nu, hnu);
  return out;
}

Vector frame_to_chart(const HessianData& h, const Vector& w) { return h.frame * w; }

Vector radial_in_principal_frame(const HessianData& h, const PrincipalFrameData& pf,
                                 const manifold::PointCurvature& c) {
  const Vector radial_frame = h.frame_inverse * c.radial_chart;
  return transpose(pf.basis) * radial_frame;
}

double level_mean_curvature(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                            int r) {
  const auto pf = principal_frame(hessian_frame(u, m, p));
  return algebra::sigma_elementary(pf.kappa.span(), r);
}

Reilly2Check reilly2_check(const ScalarField& u, const ModelManifold& m, const ChartPoint& p,
                           int r) {
  const int n = m.dim();
  require(r >= 0 && r <= n - 1, ErrorKind::Argument, "need 0 <= r <= n-1");
  const HessianData h = hessian_frame(u, m, p);
  const PrincipalFrameData pf = principal_frame(h);

  Reilly2Check out;
  out.sigma = algebra::sigma_elementary(pf.kappa.span(), r);
  const auto t = algebra::newton_operator(h.hess_frame, r);
  const double grad_r2 = std::pow(h.grad_norm, r + 2);
  out.quotient = dot(h.grad_frame, t.matrix.matrix() * h.grad_frame) / grad_r2;
  out.residual = std::abs(out.sigma - out.quotient);

  Vector abs_kappa(n - 1);
  for (int i = 0; i < n - 1; ++i) abs_kappa[i] = std::abs(pf.kappa[i]);
  const double hess_scale = max_abs(h.hess_frame.matrix()) / h.grad_norm;
  out.scale = std::max({algebra::sigma_elementary(abs_kappa.span(), r),
                        static_cast<double>(algebra::binomial(n, r)) * std::pow(hess_scale, r),
                        1e-300});
  return out;
}

double reilly2_residual(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r) {
  return reilly2_check(u, m, p, r).residual;
}

Vector div_newton_contracted(const HessianData& h, const manifold::RiemannTensor& riemann, int r) {
  const int n = h.hess_frame.dim();
  Vector out(n);
  if (r == 0) return out;
  require(r >= 1 && r <= n, ErrorKind::Argument, "need 1 <= r <= n");

  // rg(a, b, c) = R_{abck} u_k
  std::vector<double> rg(static_cast<std::size_t>(n * n * n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += riemann(a, b, c, k) * h.grad_frame[k];
        rg[(a * n + b) * n + c] = s;
      }

  const int m = r + 1;
  std::array<int, kMaxDim> upper{};
  std::array<int, kMaxDim> lower{};
  std::array<int, kMaxDim> perm{};
  for (int i = 0; i < n; ++i) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != r - 1 || (mask & (1u << i))) continue;
      for (int ir = 0; ir < n; ++ir) {
        if (ir == i || (mask & (1u << ir))) continue;
        upper[0] = i;
        int count = 1;
        for (int s = 0; s < n; ++s)
          if (mask & (1u << s)) upper[count++] = s;
        upper[r] = ir;
        std::iota(perm.begin(), perm.begin() + m, 0);
        do {
          for (int k = 0; k < m; ++k) lower[k] = upper[perm[k]];
          const int delta = algebra::kronecker_delta(std::span<const int>(upper.data(), m),
                                                     std::span<const int>(lower.data(), m));
          double product = delta;
          for (int k = 1; k < r && product != 0.0; ++k)
            product *= h.hess_frame(upper[k], lower[k]);
          if (product == 0.0) continue;
          out[lower[0]] += product * rg[(i * n + lower[r]) * n + ir];
        } while (std::next_permutation(perm.begin(), perm.begin() + m));
      }
    }
  }
  return out;
}

Vector div_newton_frame(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r) {
  require(r >= 1, ErrorKind::Argument, "div(T_r) needs r >= 1");
  const HessianData h = hessian_frame(u, m, p);
  if (!(h.grad_norm > 0.0)) fail(ErrorKind::DegenerateGradient, "gradient vanishes");
  const auto pc = manifold::point_curvature(m, p);
  const auto riemann = manifold::riemann_in_frame(pc, h.frame_inverse * pc.radial_chart);
  return div_newton_contracted(h, riemann, r);
}

Vector div_newton_finite_difference(const ScalarField& u, const ModelManifold& m,
                                    const ChartPoint& p, int r, double step) {
  const int n = m.dim();
  require(step > 0.0, ErrorKind::Argument, "step must be positive");
  auto newton_at = [&](const ChartPoint& q) {
    return algebra::newton_operator_general(chart_hessian(u, m, q).mixed, r);
  };
  Vector div(n);
  // d_i T^i_j
  for (int i = 0; i < n; ++i) {
    const Matrix up = newton_at(shifted(p, i, step));
    const Matrix down = newton_at(shifted(p, i, -step));
    for (int j = 0; j < n; ++j) div[j] += (up(i, j) - down(i, j)) / (2.0 * step);
  }
  const Matrix t = newton_at(p);
  const auto gamma = manifold::christoffel_at(m, p);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) s += gamma(i, i, k) * t(k, j) - gamma(k, i, j) * t(i, k);
    div[j] += s;
  }
  const Matrix l = cholesky_lower(manifold::metric_at(m, p));
  return lower_triangular_inverse(l) * div;
}

double reilly1_residual(const ScalarField& u, const ModelManifold& m, const ChartPoint& p, int r,
                        double step) {
  const int n = m.dim();
  require(r >= 1 && r <= n, ErrorKind::Argument, "need 1 <= r <= n");
  require(step > 0.0, ErrorKind::Argument, "step must be positive");

  // V^i = T_{r-1}(A)^i_j (g^{-1} du)^j / |grad u|^r in chart components.
  auto field_at = [&](const ChartPoint& q) {
    const ChartHessian ch = chart_hessian(u, m, q);
    const Vector grad = ch.ginv * ch.du;
    const double len = std::sqrt(dot(grad, ch.du));
    if (!(len > kDefaultGradientCutoff))
      fail(ErrorKind::DegenerateGradient, "degenerate gradient inside the difference stencil");
    return (1.0 / std::pow(len, r)) * (algebra::newton_operator_general(ch.mixed, r - 1) * grad);
  };

  double lhs = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector up = field_at(shifted(p, i, step));
    const Vector down = field_at(shifted(p, i, -step));
    lhs += (up[i] - down[i]) / (2.0 * step);
  }
  const Vector center = field_at(p);
  const auto gamma = manifold::christoffel_at(m, p);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) lhs += gamma(i, i, k) * center[k];

  const HessianData h = hessian_frame(u, m, p, Derivatives::Analytic);
  const auto pc = manifold::point_curvature(m, p);
  const auto riemann = manifold::riemann_in_frame(pc, h.frame_inverse * pc.radial_chart);
  const Vector div_prev = div_newton_contracted(h, riemann, r - 1);
  const auto t = algebra::newton_operator(h.hess_frame, r);
  const double len = h.grad_norm;
  const double rhs = dot(div_prev, h.grad_frame) / std::pow(len, r) +
                     r * dot(h.grad_frame, t.matrix.matrix() * h.grad_frame) / std::pow(len, r + 2);
  return std::abs(lhs - rhs);
}

}  // namespace curvatura::levelset
