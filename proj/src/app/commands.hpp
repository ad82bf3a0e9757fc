#pragma once

// compute / verify / sweep on a validated RunConfig.
//
// Files written to the output directory:
//   compute  mean_curvature.csv or comparison.csv
//   verify   verify.csv, report.json
//   sweep    sweep.csv

#include <string>
#include <vector>

#include "config.hpp"

namespace curvatura::app {

struct RunOutcome {
  bool passed = true;  // false only when a verification suite failed
  std::string summary;
  std::vector<std::string> files;
};

/// Creates the directory when missing and probes it for writability (Io error otherwise).
void prepare_output_dir(const std::string& dir);

RunOutcome run_command(const RunConfig& cfg, Command command, const std::string& out_dir,
                       bool quick);

/// Column headers, kept here so tests and docs can refer to them.
extern const char* const kMeanCurvatureColumns;
extern const char* const kComparisonColumns;
extern const char* const kSweepColumns;

}  // namespace curvatura::app
