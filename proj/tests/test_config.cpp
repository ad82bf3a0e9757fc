#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace curvatura;
using namespace curvatura::app;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("curvatura_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const auto cfg = parse_config(R"({"schema_version": 1})");
  CHECK(cfg.dim == 3);
  CHECK(cfg.seed == kDefaultSeed);
  CHECK(cfg.model.family == "euclidean");
  CHECK(cfg.orders() == std::vector<int>{0, 1, 2});
  CHECK_FALSE(cfg.command.has_value());
}

TEST_CASE("errors name the offending key") {
  CHECK(starts_with(error_of(R"({"schema_version": 2})"), "schema_version:"));
  CHECK(starts_with(error_of(R"({})"), "schema_version: required"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "bogus": 0})"), "bogus: unknown key"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "euclidean", "dim": 9}})"),
                    "manifold.dim:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "constant", "a": 1, "dim": 3}})"),
                    "manifold.a:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "constant", "dim": 3}})"),
                    "manifold.a: required"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "warped", "profile": "sin"}})"),
                    "manifold.profile:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "field": {"kind": "offcenter"}})"),
                    "field.center: required"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "r": [0, 5]})"), "r[1]:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "quadrature": {"margin": 0.1}})"),
                    "quadrature.margin:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "verify": {"suites": ["algebra", "nope"]}})"),
                    "verify.suites[1]:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "seed": -4})"), "seed:"));
  CHECK(starts_with(error_of("{not json"), "<root>: invalid JSON"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "compute": {"quantity": "comparison", "levels": [1]}})"),
                    "compute:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "r": -1, "compute": {"quantity": "comparison", "levels": [1, 2]}})"),
                    "r:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "field": {"kind": "quadratic", "Q": [[1,0,0],[0,1,0],[0,0,1]]}, "compute": {"radii": [1]}})"),
                    "compute.radii:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "constant", "a": -1, "dim": 3}, "field": {"kind": "radial", "center": [0.1, 0, 0]}})"),
                    "field.center:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "manifold": {"family": "warped", "profile": "poly3"}, "sweep": {"variable": "a", "grid": [0, -1]}})"),
                    "sweep.variable:"));
}

TEST_CASE("grid forms") {
  const auto lin = parse_config(R"({"schema_version": 1, "sweep": {"variable": "rho", "grid": {"linspace": [1, 2, 5]}}})");
  REQUIRE(lin.sweep.grid.size() == 5);
  CHECK(lin.sweep.grid[2] == doctest::Approx(1.5));
  const auto log = parse_config(R"({"schema_version": 1, "sweep": {"variable": "rho", "grid": {"logspace": [0.01, 1, 3]}}})");
  REQUIRE(log.sweep.grid.size() == 3);
  CHECK(log.sweep.grid[0] == 0.01);
  CHECK(log.sweep.grid[1] == doctest::Approx(0.1));
  CHECK(log.sweep.grid[2] == 1.0);
  const auto vals = parse_config(R"({"schema_version": 1, "sweep": {"variable": "level", "grid": {"values": [0.5, 0.7]}}})");
  CHECK(vals.sweep.grid == std::vector<double>{0.5, 0.7});
  CHECK(starts_with(error_of(R"({"schema_version": 1, "sweep": {"variable": "rho", "grid": {"logspace": [0, 1, 3]}}})"),
                    "sweep.grid.logspace:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "sweep": {"variable": "rho", "grid": {"cubes": [1, 2, 3]}}})"),
                    "sweep.grid.cubes:"));
  CHECK(starts_with(error_of(R"({"schema_version": 1, "sweep": {"variable": "rho", "grid": [1, -1]}})"),
                    "sweep.grid[1]:"));
}

TEST_CASE("bundled configs load") {
  const std::filesystem::path dir = CURVATURA_TEST_CONFIGS;
  for (const char* name : {"compute_sphere.json", "compute_comparison.json", "sweep_rho.json",
                           "sweep_ball_bound.json", "verify_all.json", "verify_pointwise.json",
                           "geometry_error.json"})
    CHECK_NOTHROW(load_config((dir / name).string()));
  CHECK_THROWS_AS(load_config((dir / "bad_schema.json").string()), Error);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), Error);
  const auto all = load_config((dir / "verify_all.json").string());
  CHECK(all.verify.suites.size() == 5);
}

TEST_CASE("compute writes mean curvature rows") {
  const auto cfg = parse_config(R"({
    "schema_version": 1,
    "manifold": {"family": "constant", "a": -1, "dim": 3},
    "field": {"kind": "radial"},
    "r": [1, 2],
    "quadrature": {"angular_order": 12, "level_order": 8},
    "compute": {"radii": [1.0]}})");
  const auto dir = scratch("compute");
  const auto out = run_command(cfg, Command::Compute, dir.string(), false);
  CHECK(out.passed);
  REQUIRE(out.files.size() == 1);
  const auto text = slurp(out.files[0]);
  CHECK(starts_with(text, kMeanCurvatureColumns));
  std::istringstream lines(text);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  // model,field,n,r,level,value,...
  auto field = [](const std::string& row, int k) {
    std::istringstream s(row);
    std::string item;
    for (int i = 0; i <= k; ++i) std::getline(s, item, ',');
    return item;
  };
  const double c = std::cosh(1.0);
  CHECK(std::stod(field(row2, 5)) == doctest::Approx(4 * M_PI * c * c).epsilon(1e-8));
  CHECK(field(row2, 3) == "2");
  std::filesystem::remove_all(dir);
}

TEST_CASE("level sweep of parallel spheres is nondecreasing per order") {
  const auto cfg = load_config(std::string(CURVATURA_TEST_CONFIGS) + "/sweep_levels.json");
  const auto dir = scratch("sweep_levels");
  const auto out = run_command(cfg, Command::Sweep, dir.string(), false);
  REQUIRE(out.files.size() == 1);
  std::istringstream lines(slurp(out.files[0]));
  std::string row;
  std::getline(lines, row);
  CHECK(row == kSweepColumns);
  std::map<std::string, double> last;
  int rows = 0;
  while (std::getline(lines, row)) {
    std::vector<std::string> cols;
    std::istringstream s(row);
    for (std::string c; std::getline(s, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 9);
    const double v = std::stod(cols[7]);
    if (last.count(cols[5])) CHECK(v >= last[cols[5]]);
    last[cols[5]] = v;
    ++rows;
  }
  CHECK(rows == 16);
  std::filesystem::remove_all(dir);
}

TEST_CASE("command mismatch and unwritable output are refused") {
  const auto cfg = parse_config(R"({"schema_version": 1, "command": "verify"})");
  try {
    run_command(cfg, Command::Compute, scratch("mismatch").string(), false);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  try {
    prepare_output_dir("/proc/curvatura_cannot_write_here");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("level beyond the working radius is a geometry error") {
  const auto cfg = load_config(std::string(CURVATURA_TEST_CONFIGS) + "/geometry_error.json");
  try {
    run_command(cfg, Command::Compute, scratch("geometry").string(), false);
    FAIL("expected geometry error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Geometry);
  }
}
