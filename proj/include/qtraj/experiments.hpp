#pragma once

// Experiment orchestration: each run owns one output directory holding
// manifest.json plus CSV data tables.

#include "qtraj/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qtraj {

/// Environment variable that, when set and non-empty, replaces output_dir.
inline constexpr const char *kOutputDirEnv = "QTRAJ_OUTPUT_DIR";

struct RunOutput {
  std::filesystem::path directory;
  /// Data tables written, relative to `directory`, in creation order.
  std::vector<std::string> files;
  /// Dimensionless and summary results of the run, also echoed into the manifest.
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  bool aborted = false;
  std::string abort_reason;
};

std::string library_version();

/// config.output_dir unless QTRAJ_OUTPUT_DIR overrides it.
std::filesystem::path resolve_output_dir(const RunConfig &config);

/// Runs config.experiment into resolve_output_dir(config).
///
/// The manifest is written before any table (status "running") and rewritten
/// at the end with a SHA-256 checksum for every table. A NumericalAbort does
/// not propagate: the run ends with status "aborted", the reason is recorded,
/// and tables already written stay on disk.
RunOutput run_experiment(const RunConfig &config);
RunOutput run_experiment(const RunConfig &config, const std::filesystem::path &directory);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path &path);

} // namespace qtraj
