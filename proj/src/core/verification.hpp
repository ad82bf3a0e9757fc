#pragma once

// Property suites binding each identity and inequality to pass/fail cases.
//
//   algebra     symmetric-function and Newton-operator identities on random matrices
//   pointwise   Reilly identities and the divergence formula at random points
//   comparison  the comparison formula, its constant-curvature and Ricci forms,
//               and the double-factorial recursion for M_{n-1}
//   inequality  monotonicity, the M_1 volume bound and the ball comparison
//   asymptotic  small-sphere behaviour of M_r

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "model_specs.hpp"
#include "quadrature.hpp"

namespace curvatura::verify {

enum class SuiteId { Algebra, Pointwise, Comparison, Inequality, Asymptotic };

std::string suite_name(SuiteId id);
std::optional<SuiteId> parse_suite(const std::string& name);
std::vector<SuiteId> all_suites();

struct Tolerances {
  double sigma = 1e-10;            // dual-path sigma_r, orthogonal invariance
  double cayley_hamilton = 1e-9;   // ||T_n|| / max(1, ||H||)^n
  double cofactor = 1e-9;
  double trace = 1e-10;
  double newton_forms = 1e-10;     // partial-derivative and power-sum forms vs recursion
  double reilly2 = 1e-8;
  double div_newton = 1e-6;        // contraction vs finite differences, relative to max(|div|, 1)
  double flat_div = 1e-12;
  double fd_order = 1.9;
  double comparison_radial = 1e-6;
  double comparison_field = 1e-3;
  double constant_paths = 1e-7;
  double ricci_paths = 1e-9;
  double solanes = 1e-6;
  double volume_bound = 1e-6;
  double ball_equality = 1e-9;
  double slope = 0.02;
  double limit = 0.01;
  double strict_factor = 10.0;     // strict inequalities need margin > factor * error_budget
};

struct SuiteConfig {
  SuiteId id = SuiteId::Algebra;
  std::uint64_t seed = 20240611;
  bool quick = false;
  std::vector<ModelSpec> models;    // empty: suite default
  std::vector<std::string> fields;  // empty: suite default
  std::vector<int> dims;            // empty: suite default
  int matrices = 1000;              // algebra: random matrices per dimension
  int points = 200;                 // pointwise: points per (model, field, n, r)
  int fd_points = 50;               // pointwise: finite-difference points per configuration
  int angular_order = 0;            // 0: suite default
  int level_order = 0;
  Tolerances tol;

  /// Reduced sample counts and grids for smoke runs.
  void apply_quick();
};

struct CaseRecord {
  std::string check;
  std::string family;  // model family, or "algebra"
  std::string model;
  std::string field;
  int n = 0;
  int r = 0;
  std::string inputs;  // everything needed to rerun the case in isolation
  double measured = 0.0;
  double expected = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  SuiteId id = SuiteId::Algebra;
  std::uint64_t seed = 0;
  std::vector<CaseRecord> cases;
  bool pass = false;
  double seconds = 0.0;

  std::size_t failures() const;
};

SuiteReport run_suite(const SuiteConfig& cfg);
SuiteReport run_algebra_suite(const SuiteConfig& cfg);
SuiteReport run_pointwise_suite(const SuiteConfig& cfg);
SuiteReport run_comparison_suite(const SuiteConfig& cfg);
SuiteReport run_inequality_suite(const SuiteConfig& cfg);
SuiteReport run_asymptotic_suite(const SuiteConfig& cfg);

/// Deterministic per-case generator: splitmix64 of (seed, stream) seeds an mt19937_64.
class CaseRng {
 public:
  CaseRng(std::uint64_t seed, std::uint64_t stream);
  double uniform();                  // [0, 1) with 53 random bits
  double uniform(double lo, double hi);
  double normal();                   // Box-Muller, no cached second value
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// CSV header and rows with 17 significant digits; no timings.
std::string report_csv_header();
std::string report_csv_rows(const SuiteReport& report);

}  // namespace curvatura::verify
