#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace curvatura::app {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::Config, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad(join(path, it.key()), "unknown key");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "expected finite number");
  return v;
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected integer");
  return j.get<long long>();
}

int get_int_in(const json& j, const std::string& path, long long lo, long long hi) {
  const long long v = get_integer(j, path);
  if (v < lo || v > hi)
    bad(path, "expected integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected string");
  return j.get<std::string>();
}

std::string get_choice(const json& j, const std::string& path, const std::set<std::string>& choices) {
  const std::string s = get_string(j, path);
  if (!choices.count(s)) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    bad(path, "expected one of {" + list + "}, got '" + s + "'");
  }
  return s;
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected boolean");
  return j.get<bool>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v < 0) bad(path, "expected non-negative integer");
    return static_cast<std::uint64_t>(v);
  }
  bad(path, "expected non-negative integer");
}

std::vector<double> parse_grid(const json& j, const std::string& path) {
  if (j.is_array()) return get_numbers(j, path);
  expect_object(j, path);
  if (j.size() != 1) bad(path, "expected exactly one of logspace, linspace, values");
  const std::string key = j.begin().key();
  const json& spec = j.begin().value();
  const std::string sub = join(path, key);
  if (key == "values") return get_numbers(spec, sub);
  if (key != "logspace" && key != "linspace") bad(sub, "unknown grid kind");
  const auto v = get_numbers(spec, sub);
  if (v.size() != 3) bad(sub, "expected [start, stop, count]");
  const double count = v[2];
  if (count < 1 || count > 100000 || count != std::floor(count)) bad(sub + "[2]", "expected count in [1, 100000]");
  const int k = static_cast<int>(count);
  std::vector<double> out;
  if (key == "logspace") {
    if (v[0] <= 0 || v[1] <= 0) bad(sub, "logspace endpoints must be positive");
    for (int i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
      out.push_back(std::exp(std::log(v[0]) + t * (std::log(v[1]) - std::log(v[0]))));
    }
    out.back() = v[1];
    out.front() = v[0];
  } else {
    for (int i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
      out.push_back(v[0] + t * (v[1] - v[0]));
    }
  }
  return out;
}

void parse_manifold(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"family", "a", "profile", "dim", "working_radius"});
  if (!j.contains("family")) bad(join(path, "family"), "required");
  cfg.model.family = get_choice(j["family"], join(path, "family"), {"euclidean", "constant", "warped"});
  if (j.contains("dim")) cfg.dim = get_int_in(j["dim"], join(path, "dim"), 2, 6);
  if (j.contains("a")) {
    if (cfg.model.family != "constant") bad(join(path, "a"), "only valid for family 'constant'");
    cfg.model.a = get_number(j["a"], join(path, "a"));
    if (cfg.model.a > 0) bad(join(path, "a"), "must be <= 0");
  } else if (cfg.model.family == "constant") {
    bad(join(path, "a"), "required for family 'constant'");
  }
  if (j.contains("profile")) {
    if (cfg.model.family != "warped") bad(join(path, "profile"), "only valid for family 'warped'");
    cfg.model.profile = get_choice(j["profile"], join(path, "profile"), {"linear", "sinh", "poly3"});
  }
  if (j.contains("working_radius")) {
    cfg.model.working_radius = get_number(j["working_radius"], join(path, "working_radius"));
    if (cfg.model.working_radius <= 0) bad(join(path, "working_radius"), "must be positive");
  }
}

void parse_field(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"kind", "center", "Q"});
  if (!j.contains("kind")) bad(join(path, "kind"), "required");
  cfg.field.kind =
      get_choice(j["kind"], join(path, "kind"), {"radial", "radial_sq", "quadratic", "offcenter"});
  const int n = cfg.dim;
  if (j.contains("center")) {
    if (cfg.field.kind == "quadratic") bad(join(path, "center"), "not valid for quadratic fields");
    cfg.field.center = get_numbers(j["center"], join(path, "center"));
    if (static_cast<int>(cfg.field.center.size()) != n)
      bad(join(path, "center"), "expected " + std::to_string(n) + " entries");
  } else if (cfg.field.kind == "offcenter") {
    bad(join(path, "center"), "required for offcenter fields");
  }
  if (j.contains("Q")) {
    if (cfg.field.kind != "quadratic") bad(join(path, "Q"), "only valid for quadratic fields");
    const std::string qp = join(path, "Q");
    const json& q = j["Q"];
    if (!q.is_array() || static_cast<int>(q.size()) != n)
      bad(qp, "expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
      auto row = get_numbers(q[i], qp + "[" + std::to_string(i) + "]");
      if (static_cast<int>(row.size()) != n)
        bad(qp + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
      cfg.field.q.push_back(std::move(row));
    }
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < i; ++k)
        if (cfg.field.q[i][k] != cfg.field.q[k][i]) bad(qp, "must be symmetric");
  } else if (cfg.field.kind == "quadratic") {
    bad(join(path, "Q"), "required for quadratic fields");
  }
}

void parse_quadrature(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"angular_order", "level_order", "margin"});
  if (j.contains("angular_order"))
    cfg.quadrature.angular_order = get_int_in(j["angular_order"], join(path, "angular_order"), 2, 1024);
  if (j.contains("level_order"))
    cfg.quadrature.level_order = get_int_in(j["level_order"], join(path, "level_order"), 2, 1024);
  if (j.contains("margin")) {
    cfg.quadrature.margin = get_number(j["margin"], join(path, "margin"));
    if (cfg.quadrature.margin <= 0 || cfg.quadrature.margin > 1e-3)
      bad(join(path, "margin"), "expected value in (0, 1e-3]");
  }
}

void parse_orders(const json& j, const std::string& path, RunConfig& cfg) {
  const int n = cfg.dim;
  if (j.is_string()) {
    if (j.get<std::string>() != "all") bad(path, "expected integer, array of integers or \"all\"");
    cfg.r.clear();
    return;
  }
  std::vector<json> items;
  if (j.is_array())
    items.assign(j.begin(), j.end());
  else
    items.push_back(j);
  if (items.empty()) bad(path, "expected at least one order");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string p = j.is_array() ? path + "[" + std::to_string(i) + "]" : path;
    cfg.r.push_back(get_int_in(items[i], p, -1, n - 1));
  }
}

void parse_compute(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"quantity", "levels", "radii"});
  if (j.contains("quantity"))
    cfg.compute.quantity = get_choice(
        j["quantity"], join(path, "quantity"),
        {"mean_curvature", "comparison", "comparison_constant", "ricci_comparison"});
  if (j.contains("levels") && j.contains("radii")) bad(path, "give either levels or radii, not both");
  if (j.contains("levels")) cfg.compute.levels = get_numbers(j["levels"], join(path, "levels"));
  if (j.contains("radii")) {
    if (cfg.field.kind != "radial" && cfg.field.kind != "radial_sq")
      bad(join(path, "radii"), "only valid for radial and radial_sq fields");
    cfg.compute.radii = get_numbers(j["radii"], join(path, "radii"));
    for (std::size_t i = 0; i < cfg.compute.radii.size(); ++i)
      if (cfg.compute.radii[i] <= 0) bad(join(path, "radii") + "[" + std::to_string(i) + "]", "must be positive");
  }
  const std::size_t count = cfg.compute.levels.size() + cfg.compute.radii.size();
  if (cfg.compute.quantity != "mean_curvature" && count != 2)
    bad(path, "comparison quantities need exactly two levels (inner, outer)");
}

void parse_verify(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"suites", "quick", "matrices", "points", "fd_points", "angular_order",
                           "level_order"});
  if (j.contains("suites")) {
    const std::string sp = join(path, "suites");
    const json& s = j["suites"];
    std::vector<json> names;
    if (s.is_array())
      names.assign(s.begin(), s.end());
    else
      names.push_back(s);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string p = s.is_array() ? sp + "[" + std::to_string(i) + "]" : sp;
      const std::string name = get_string(names[i], p);
      if (name == "all") {
        cfg.verify.suites = verify::all_suites();
        continue;
      }
      const auto id = verify::parse_suite(name);
      if (!id) bad(p, "unknown suite '" + name + "'");
      cfg.verify.suites.push_back(*id);
    }
  }
  if (j.contains("quick")) cfg.verify.quick = get_bool(j["quick"], join(path, "quick"));
  auto opt = [&](const char* key, std::optional<int>& out, int lo, int hi) {
    if (j.contains(key)) out = get_int_in(j[key], join(path, key), lo, hi);
  };
  opt("matrices", cfg.verify.matrices, 1, 1000000);
  opt("points", cfg.verify.points, 1, 1000000);
  opt("fd_points", cfg.verify.fd_points, 1, 100000);
  opt("angular_order", cfg.verify.angular_order, 2, 1024);
  opt("level_order", cfg.verify.level_order, 2, 1024);
}

void parse_sweep(const json& j, const std::string& path, RunConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path, {"variable", "grid", "quantity", "rho"});
  if (!j.contains("variable")) bad(join(path, "variable"), "required");
  cfg.sweep.variable = get_choice(j["variable"], join(path, "variable"), {"rho", "a", "level"});
  if (!j.contains("grid")) bad(join(path, "grid"), "required");
  cfg.sweep.grid = parse_grid(j["grid"], join(path, "grid"));
  if (cfg.sweep.grid.empty()) bad(join(path, "grid"), "empty grid");
  if (j.contains("quantity"))
    cfg.sweep.quantity = get_choice(j["quantity"], join(path, "quantity"),
                                    {"mean_curvature", "sphere_oracle", "ball_bound"});
  if (j.contains("rho")) {
    cfg.sweep.rho = get_number(j["rho"], join(path, "rho"));
    if (cfg.sweep.rho <= 0) bad(join(path, "rho"), "must be positive");
  }
  const std::string gp = join(path, "grid");
  for (std::size_t i = 0; i < cfg.sweep.grid.size(); ++i) {
    const double x = cfg.sweep.grid[i];
    const std::string p = gp + "[" + std::to_string(i) + "]";
    if (cfg.sweep.variable == "rho" && x <= 0) bad(p, "radii must be positive");
    if (cfg.sweep.variable == "a" && x > 0) bad(p, "curvature must be <= 0");
  }
  if (cfg.sweep.variable == "level" && cfg.sweep.quantity != "mean_curvature")
    bad(join(path, "quantity"), "level sweeps support mean_curvature only");
  if (cfg.sweep.variable == "rho" && cfg.sweep.quantity == "mean_curvature" &&
      cfg.field.kind != "radial" && cfg.field.kind != "radial_sq")
    bad(join(path, "variable"), "rho sweeps of mean_curvature need a radial or radial_sq field");
  if (cfg.sweep.quantity == "ball_bound" && cfg.model.family == "warped")
    bad(join(path, "quantity"), "ball_bound needs a constant curvature or euclidean model");
  if (cfg.sweep.variable == "a" && cfg.model.family == "warped")
    bad(join(path, "variable"), "curvature sweeps replace the model; use family constant or euclidean");
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Compute: return "compute";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  if (name == "compute") return Command::Compute;
  if (name == "verify") return Command::Verify;
  if (name == "sweep") return Command::Sweep;
  return std::nullopt;
}

std::vector<int> RunConfig::orders() const {
  if (!r.empty()) return r;
  std::vector<int> all;
  for (int k = 0; k < dim; ++k) all.push_back(k);
  return all;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("<root>: invalid JSON: ") + e.what());
  }
  expect_object(j, "");
  reject_unknown(j, "", {"schema_version", "command", "seed", "threads", "manifold", "field",
                         "quadrature", "r", "compute", "verify", "sweep"});
  RunConfig cfg;
  if (!j.contains("schema_version")) bad("schema_version", "required");
  cfg.schema_version = get_int_in(j["schema_version"], "schema_version", 0, 1000000);
  if (cfg.schema_version != kSchemaVersion)
    bad("schema_version", "unsupported version " + std::to_string(cfg.schema_version) +
                              " (expected " + std::to_string(kSchemaVersion) + ")");
  if (j.contains("command")) {
    const auto c = parse_command(get_string(j["command"], "command"));
    if (!c) bad("command", "expected one of {compute, sweep, verify}");
    cfg.command = c;
  }
  if (j.contains("seed")) cfg.seed = get_seed(j["seed"], "seed");
  if (j.contains("threads")) cfg.threads = get_int_in(j["threads"], "threads", 0, 1024);

  // Order matters: dim and field kind are needed by later sections.
  if (j.contains("manifold")) parse_manifold(j["manifold"], "manifold", cfg);
  if (j.contains("field")) parse_field(j["field"], "field", cfg);
  if (j.contains("quadrature")) parse_quadrature(j["quadrature"], "quadrature", cfg);
  if (j.contains("r")) parse_orders(j["r"], "r", cfg);
  if (j.contains("compute")) parse_compute(j["compute"], "compute", cfg);
  if (j.contains("verify")) parse_verify(j["verify"], "verify", cfg);
  if (j.contains("sweep")) parse_sweep(j["sweep"], "sweep", cfg);

  if (cfg.compute.quantity != "mean_curvature" || cfg.sweep.quantity != "mean_curvature")
    for (int r : cfg.r)
      if (r < 0) bad("r", "order -1 (volume) is only valid for mean_curvature");
  if ((cfg.field.kind == "radial" || cfg.field.kind == "radial_sq") && !cfg.field.center.empty() &&
      cfg.model.family != "euclidean") {
    for (double c : cfg.field.center)
      if (c != 0.0) bad("field.center", "radial fields about a point other than the pole need a euclidean model");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace curvatura::app
