#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "curvature_integrals.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "parallel.hpp"

namespace curvatura::app {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* const kMeanCurvatureColumns = "model,field,n,r,level,value,error_estimate,nodes";
const char* const kComparisonColumns =
    "model,field,n,r,c1,c2,lhs,term_principal,term_sectional,term_mixed,rhs,residual,"
    "relative_residual,error_budget,nodes";
const char* const kSweepColumns = "variable,x,model,field,n,r,quantity,value,error_estimate";

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text, RunOutcome& outcome) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
  outcome.files.push_back(path.string());
}

std::string model_label(const ModelSpec& m) {
  if (m.family == "constant") return "constant(" + format_double(m.a) + ")";
  if (m.family == "warped") return "warped(" + m.profile + ")";
  return "euclidean";
}

std::string field_label(const FieldSpec& f) {
  std::string s = f.kind;
  if (!f.center.empty()) {
    s += "(";
    for (std::size_t i = 0; i < f.center.size(); ++i) s += (i ? " " : "") + format_double(f.center[i]);
    s += ")";
  }
  if (!f.q.empty()) {
    s += "[";
    for (std::size_t i = 0; i < f.q.size(); ++i)
      for (std::size_t j = 0; j < f.q.size(); ++j) s += (i + j ? " " : "") + format_double(f.q[i][j]);
    s += "]";
  }
  return s;
}

quadrature::QuadratureSpec make_spec(const RunConfig& cfg) {
  auto spec = quadrature::QuadratureSpec::uniform(cfg.quadrature.angular_order,
                                                  cfg.quadrature.level_order);
  spec.margin = cfg.quadrature.margin;
  spec.validate(cfg.dim);
  return spec;
}

std::vector<double> levels_for(const RunConfig& cfg, const levelset::ScalarField& u) {
  std::vector<double> levels = cfg.compute.levels;
  for (double rho : cfg.compute.radii) levels.push_back(u.radius_to_level(rho));
  if (levels.empty()) levels.push_back(1.0);
  return levels;
}

// Plain fixed-width table for the terminal.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width(rows_[0].size(), 0);
    for (const auto& row : rows_)
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    std::string out;
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out += row[i];
        if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

RunOutcome compute(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const auto m = build_model(cfg.model, cfg.dim);
  const auto u = build_field(cfg.field, cfg.dim);
  u.check_compatible(m);
  const auto spec = make_spec(cfg);
  const auto levels = levels_for(cfg, u);
  const std::string ml = model_label(cfg.model), fl = field_label(cfg.field);
  const std::string n = std::to_string(cfg.dim);

  if (cfg.compute.quantity == "mean_curvature") {
    std::string csv = std::string(kMeanCurvatureColumns) + "\n";
    Table table({"r", "level", "M_r", "error"});
    for (double level : levels)
      for (int r : cfg.orders()) {
        const auto rep = integrals::total_mean_curvature(u, m, level, r, spec);
        csv += csv_field(ml) + ',' + csv_field(fl) + ',' + n + ',' + std::to_string(r) + ',' +
               format_double(level) + ',' + format_double(rep.value) + ',' +
               format_double(rep.error_estimate) + ',' + std::to_string(rep.node_count) + '\n';
        table.add({std::to_string(r), short_number(level), short_number(rep.value),
                   short_number(rep.error_estimate)});
      }
    write_file(dir / "mean_curvature.csv", csv, outcome);
    outcome.summary = ml + ", n=" + n + ", " + fl + "\n" + table.str();
    return outcome;
  }

  const double c1 = levels[0], c2 = levels[1];
  std::vector<int> orders = cfg.orders();
  if (cfg.compute.quantity == "ricci_comparison") orders = {1};
  std::string csv = std::string(kComparisonColumns) + "\n";
  Table table({"r", "lhs", "rhs", "residual", "budget"});
  for (int r : orders) {
    integrals::ComparisonBreakdown b;
    if (cfg.compute.quantity == "comparison")
      b = integrals::comparison_rhs(u, m, c1, c2, r, spec);
    else if (cfg.compute.quantity == "comparison_constant")
      b = integrals::comparison_rhs_constant(u, m, c1, c2, r, spec);
    else
      b = integrals::ricci_comparison(u, m, c1, c2, spec);
    csv += csv_field(ml) + ',' + csv_field(fl) + ',' + n + ',' + std::to_string(r) + ',' +
           format_double(c1) + ',' + format_double(c2) + ',' + format_double(b.lhs) + ',' +
           format_double(b.term_principal) + ',' + format_double(b.term_sectional) + ',' +
           format_double(b.term_mixed) + ',' + format_double(b.rhs()) + ',' +
           format_double(b.residual) + ',' + format_double(b.relative_residual()) + ',' +
           format_double(b.error_budget) + ',' + std::to_string(b.node_count) + '\n';
    table.add({std::to_string(r), short_number(b.lhs), short_number(b.rhs()),
               short_number(b.residual), short_number(b.error_budget)});
  }
  write_file(dir / "comparison.csv", csv, outcome);
  outcome.summary = cfg.compute.quantity + ": " + ml + ", n=" + n + ", " + fl + ", levels " +
                    short_number(c1) + " -> " + short_number(c2) + "\n" + table.str();
  return outcome;
}

RunOutcome sweep(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const auto spec = make_spec(cfg);
  const auto u = build_field(cfg.field, cfg.dim);
  const std::string fl = field_label(cfg.field);
  const std::string n = std::to_string(cfg.dim);
  const std::string& var = cfg.sweep.variable;
  const std::string& quantity = cfg.sweep.quantity;
  std::string csv = std::string(kSweepColumns) + "\n";
  std::size_t rows = 0;

  for (double x : cfg.sweep.grid) {
    ModelSpec ms = cfg.model;
    if (var == "a") ms = x == 0.0 ? ModelSpec::euclidean() : ModelSpec::constant(x);
    const auto m = build_model(ms, cfg.dim);
    const double a = ms.family == "constant" ? ms.a : 0.0;
    const double rho = var == "rho" ? x : cfg.sweep.rho;
    if (quantity == "mean_curvature") u.check_compatible(m);
    for (int r : cfg.orders()) {
      double value = 0.0, error = 0.0;
      if (quantity == "mean_curvature") {
        const double level = var == "level" ? x : u.radius_to_level(rho);
        const auto rep = integrals::total_mean_curvature(u, m, level, r, spec);
        value = rep.value;
        error = rep.error_estimate;
      } else if (quantity == "sphere_oracle") {
        value = manifold::sphere_total_mean_curvature(m, r, rho);
      } else {
        value = integrals::ball_bound(r, rho, a, cfg.dim);
      }
      csv += var + ',' + format_double(x) + ',' + csv_field(model_label(ms)) + ',' + csv_field(fl) +
             ',' + n + ',' + std::to_string(r) + ',' + quantity + ',' + format_double(value) + ',' +
             format_double(error) + '\n';
      ++rows;
    }
  }
  write_file(dir / "sweep.csv", csv, outcome);
  outcome.summary = "sweep " + var + " over " + std::to_string(cfg.sweep.grid.size()) +
                    " points, " + quantity + ": " + std::to_string(rows) + " rows\n";
  return outcome;
}

ordered_json number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(format_double(v));
}

RunOutcome verify_suites(const RunConfig& cfg, const fs::path& dir, bool quick) {
  RunOutcome outcome;
  auto suites = cfg.verify.suites;
  if (suites.empty()) suites = verify::all_suites();
  std::string csv = verify::report_csv_header();
  ordered_json report;
  report["schema_version"] = kSchemaVersion;
  report["seed"] = cfg.seed;
  report["quick"] = quick || cfg.verify.quick;
  ordered_json suite_list = ordered_json::array();
  ordered_json failures = ordered_json::array();
  Table table({"suite", "cases", "failures", "seconds", "result"});
  bool all_pass = true;

  for (auto id : suites) {
    verify::SuiteConfig sc;
    sc.id = id;
    sc.seed = cfg.seed;
    if (quick || cfg.verify.quick) sc.apply_quick();
    if (cfg.verify.matrices) sc.matrices = *cfg.verify.matrices;
    if (cfg.verify.points) sc.points = *cfg.verify.points;
    if (cfg.verify.fd_points) sc.fd_points = *cfg.verify.fd_points;
    if (cfg.verify.angular_order) sc.angular_order = *cfg.verify.angular_order;
    if (cfg.verify.level_order) sc.level_order = *cfg.verify.level_order;
    const auto rep = verify::run_suite(sc);
    csv += verify::report_csv_rows(rep);
    all_pass = all_pass && rep.pass;
    const std::string name = verify::suite_name(id);
    suite_list.push_back({{"suite", name},
                          {"pass", rep.pass},
                          {"cases", rep.cases.size()},
                          {"failures", rep.failures()},
                          {"seconds", rep.seconds}});
    for (std::size_t i = 0; i < rep.cases.size(); ++i) {
      const auto& c = rep.cases[i];
      if (c.pass) continue;
      failures.push_back({{"suite", name},
                          {"case", i},
                          {"check", c.check},
                          {"family", c.family},
                          {"model", c.model},
                          {"field", c.field},
                          {"n", c.n},
                          {"r", c.r},
                          {"inputs", c.inputs},
                          {"measured", number(c.measured)},
                          {"expected", number(c.expected)},
                          {"residual", number(c.residual)},
                          {"tolerance", number(c.tolerance)},
                          {"note", c.note}});
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", rep.seconds);
    table.add({name, std::to_string(rep.cases.size()), std::to_string(rep.failures()), secs,
               rep.pass ? "PASS" : "FAIL"});
  }
  report["pass"] = all_pass;
  report["suites"] = suite_list;
  report["failures"] = failures;
  write_file(dir / "verify.csv", csv, outcome);
  write_file(dir / "report.json", report.dump(2) + "\n", outcome);
  outcome.passed = all_pass;
  outcome.summary = table.str() + (all_pass ? "all suites passed\n" : "verification FAILED\n");
  return outcome;
}

}  // namespace

void prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    fail(ErrorKind::Io, "output directory '" + dir + "' cannot be created");
  const fs::path probe = fs::path(dir) / ".curvatura_write_probe";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
}

RunOutcome run_command(const RunConfig& cfg, Command command, const std::string& out_dir,
                       bool quick) {
  if (cfg.command && *cfg.command != command)
    fail(ErrorKind::Config, "command: config says '" + command_name(*cfg.command) +
                                "' but '" + command_name(command) + "' was requested");
  if (command == Command::Sweep && cfg.sweep.grid.empty())
    fail(ErrorKind::Config, "sweep: required for the sweep command");
  if (command == Command::Compute && cfg.compute.quantity != "mean_curvature" &&
      cfg.compute.levels.size() + cfg.compute.radii.size() != 2)
    fail(ErrorKind::Config, "compute.levels: comparison quantities need two levels");
  prepare_output_dir(out_dir);
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  const fs::path dir(out_dir);
  switch (command) {
    case Command::Compute: return compute(cfg, dir);
    case Command::Verify: return verify_suites(cfg, dir, quick);
    case Command::Sweep: return sweep(cfg, dir);
  }
  fail(ErrorKind::Argument, "unknown command");
}

}  // namespace curvatura::app
