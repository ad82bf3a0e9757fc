#pragma once

// Run configuration, schema version 1. Parsing validates everything up front
// and reports the offending key path, e.g. "manifold.dim: expected integer".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "model_specs.hpp"
#include "verification.hpp"

namespace curvatura::app {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class Command { Compute, Verify, Sweep };

std::string command_name(Command c);
std::optional<Command> parse_command(const std::string& name);

struct QuadratureConfig {
  int angular_order = 16;
  int level_order = 16;
  double margin = 1e-6;
};

struct ComputeConfig {
  // mean_curvature | comparison | comparison_constant | ricci_comparison
  std::string quantity = "mean_curvature";
  std::vector<double> levels;  // values of u
  std::vector<double> radii;   // radial fields only; converted to levels
};

struct VerifyConfig {
  std::vector<verify::SuiteId> suites;
  bool quick = false;
  std::optional<int> matrices, points, fd_points, angular_order, level_order;
};

struct SweepConfig {
  std::string variable = "rho";            // rho | a | level
  std::vector<double> grid;
  std::string quantity = "mean_curvature";  // mean_curvature | sphere_oracle | ball_bound
  double rho = 1.0;                        // fixed radius when sweeping a
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::optional<Command> command;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;  // 0: hardware concurrency
  int dim = 3;
  ModelSpec model;
  FieldSpec field;
  QuadratureConfig quadrature;
  std::vector<int> r;  // resolved against dim; empty means every order 0..dim-1
  ComputeConfig compute;
  VerifyConfig verify;
  SweepConfig sweep;

  std::vector<int> orders() const;
};

/// Throws Error(Config) naming the key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace curvatura::app
