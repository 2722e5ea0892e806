#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sstokes/config.hpp"

namespace sstokes {

inline constexpr const char* kVersion = "0.1.0";

struct RunResult {
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<ErrorReport> reports;  // empty for the cavity run
  double wall_seconds = 0.0;
};

/// Runs the experiment described by map (preset defaults already applied),
/// writing CSVs or cavity dumps plus manifest.json into the output directory.
/// Throws ConfigError or NumericalError.
RunResult run_experiment(const ConfigMap& map, std::ostream& log);

/// Manifest JSON text (without the volatile created/wall_seconds fields when
/// stable_only is set).
std::string manifest_json(const ConfigMap& map, const RunResult& result, bool stable_only = false);

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the sstokes tool (argv as given to main).
int cli_main(int argc, char** argv);

}  // namespace sstokes
