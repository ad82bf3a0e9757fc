// curvatura compute|verify|sweep --config <path.json> --out <dir> [--threads N] [--quick]
//
// Exit codes: 0 ok, 1 internal error, 2 config error, 3 geometry/degeneracy
// error, 4 verification ran but at least one case failed.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "curvatura/curvatura.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitVerifyFailed = 4;

int exit_code(curv_status s) {
  switch (s) {
    case CURV_OK: return kExitOk;
    case CURV_ERR_CONFIG:
    case CURV_ERR_ARGUMENT:
    case CURV_ERR_CAPABILITY:
    case CURV_ERR_IO: return kExitConfig;
    case CURV_ERR_GEOMETRY: return kExitGeometry;
    case CURV_ERR_INTERNAL: break;
  }
  return kExitInternal;
}

int report(curv_status s) {
  std::fprintf(stderr, "curvatura: %s: %s\n", curv_status_name(s), curv_last_error());
  return exit_code(s);
}

bool parse_seed(const char* text, uint64_t& seed) {
  if (!text || !*text || *text == '-' || *text == '+') return false;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || *end != '\0') return false;
  seed = v;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total mean curvatures of level sets in model spaces"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  int threads = 0;
  bool quick = false;
  std::string command;
  for (const char* name : {"compute", "verify", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads, "worker threads (0: all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--quick", quick, "reduced grids and sample counts");
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  curv_config* cfg = nullptr;
  if (curv_status s = curv_config_load_file(config_path.c_str(), &cfg); s != CURV_OK)
    return report(s);

  if (const char* env = std::getenv("CURVATURA_SEED")) {
    uint64_t seed = 0;
    if (!parse_seed(env, seed)) {
      std::fprintf(stderr, "curvatura: config error: CURVATURA_SEED: expected unsigned integer\n");
      curv_config_destroy(cfg);
      return kExitConfig;
    }
    curv_config_set_seed(cfg, seed);
  }
  if (threads > 0) curv_config_set_threads(cfg, threads);
  if (quick) curv_config_set_quick(cfg, 1);

  curv_run_result* result = nullptr;
  const curv_status s = curv_run(cfg, command.c_str(), out_dir.c_str(), &result);
  curv_config_destroy(cfg);
  if (s != CURV_OK) return report(s);

  std::fputs(curv_run_result_summary(result), stdout);
  for (size_t i = 0; i < curv_run_result_file_count(result); ++i)
    std::printf("wrote %s\n", curv_run_result_file(result, i));
  const int code = curv_run_result_passed(result) ? kExitOk : kExitVerifyFailed;
  curv_run_result_destroy(result);
  return code;
}
