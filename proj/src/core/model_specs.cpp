#include "model_specs.hpp"

#include "errors.hpp"

namespace curvatura {

using manifold::ModelManifold;
using manifold::WarpingProfile;
using levelset::ScalarField;

ModelSpec ModelSpec::euclidean() { return ModelSpec{}; }

ModelSpec ModelSpec::constant(double a) {
  ModelSpec s;
  s.family = "constant";
  s.a = a;
  return s;
}

ModelSpec ModelSpec::warped(const std::string& profile) {
  ModelSpec s;
  s.family = "warped";
  s.profile = profile;
  return s;
}

ModelManifold build_model(const ModelSpec& spec, int dim) {
  require(dim >= 2 && dim <= 6, ErrorKind::Argument, "dimension must be in [2, 6]");
  if (spec.family == "euclidean") return ModelManifold::euclidean(dim);
  if (spec.family == "constant") {
    require(spec.a <= 0.0, ErrorKind::Argument, "constant curvature a must be <= 0");
    return ModelManifold::constant_curvature(spec.a, dim);
  }
  if (spec.family == "warped") {
    WarpingProfile profile;
    if (spec.profile == "linear")
      profile = WarpingProfile::linear();
    else if (spec.profile == "sinh")
      profile = WarpingProfile::hyperbolic(-1.0);
    else if (spec.profile == "poly3")
      profile = WarpingProfile::poly3();
    else
      fail(ErrorKind::Argument, "unknown warping profile '" + spec.profile + "'");
    return ModelManifold::warped(std::move(profile), dim, spec.working_radius);
  }
  fail(ErrorKind::Argument, "unknown model family '" + spec.family + "'");
}

namespace {

Vector to_vector(const std::vector<double>& v, int dim, const char* what) {
  if (v.empty()) return Vector(dim);
  if (static_cast<int>(v.size()) != dim)
    fail(ErrorKind::Argument, std::string(what) + " must have one entry per dimension");
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out[i] = v[i];
  return out;
}

}  // namespace

ScalarField build_field(const FieldSpec& spec, int dim) {
  if (spec.kind == "radial") return ScalarField::radial_distance(dim, to_vector(spec.center, dim, "center"));
  if (spec.kind == "radial_sq")
    return ScalarField::radial_distance_squared_half(dim, to_vector(spec.center, dim, "center"));
  if (spec.kind == "offcenter") {
    require(!spec.center.empty(), ErrorKind::Argument, "offcenter field needs a center");
    return ScalarField::off_center_distance(to_vector(spec.center, dim, "center"));
  }
  if (spec.kind == "quadratic") {
    require(static_cast<int>(spec.q.size()) == dim, ErrorKind::Argument, "Q must be dim x dim");
    Matrix q(dim);
    for (int i = 0; i < dim; ++i) {
      require(static_cast<int>(spec.q[i].size()) == dim, ErrorKind::Argument, "Q must be dim x dim");
      for (int j = 0; j < dim; ++j) q(i, j) = spec.q[i][j];
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j)
        require(q(i, j) == q(j, i), ErrorKind::Argument, "Q must be symmetric");
    return ScalarField::quadratic_form(SymMatrix::from(q));
  }
  fail(ErrorKind::Argument, "unknown field kind '" + spec.kind + "'");
}

FieldSpec default_field(const std::string& kind, int dim) {
  FieldSpec s;
  s.kind = kind;
  if (kind == "offcenter") {
    s.center.assign(static_cast<std::size_t>(dim), 0.0);
    s.center[0] = 0.3;
  } else if (kind == "quadratic") {
    s.q.assign(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim), 0.1));
    for (int i = 0; i < dim; ++i) s.q[i][i] = 1.0 + 0.5 * i;
  }
  return s;
}

}  // namespace curvatura
