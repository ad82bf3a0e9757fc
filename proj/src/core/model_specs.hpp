#pragma once

// Plain descriptions of models and fields, as read from configs, and the
// builders that turn them into ModelManifold / ScalarField values.

#include <string>
#include <vector>

#include "level_set_geometry.hpp"

namespace curvatura {

struct ModelSpec {
  std::string family = "euclidean";  // euclidean | constant | warped
  double a = 0.0;                    // constant family only
  std::string profile = "poly3";     // warped family: linear | sinh | poly3
  double working_radius = 10.0;

  static ModelSpec euclidean();
  static ModelSpec constant(double a);
  static ModelSpec warped(const std::string& profile);
};

struct FieldSpec {
  std::string kind = "radial";  // radial | radial_sq | quadratic | offcenter
  std::vector<double> center;   // radial kinds: optional; offcenter: required offset
  std::vector<std::vector<double>> q;  // quadratic only
};

/// Throws Argument (unknown names, bad parameters) or Capability.
manifold::ModelManifold build_model(const ModelSpec& spec, int dim);
levelset::ScalarField build_field(const FieldSpec& spec, int dim);

/// The offcenter default used by suites: offset 0.3 along the first axis.
FieldSpec default_field(const std::string& kind, int dim);

}  // namespace curvatura
