#pragma once

#include "gpe/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gpe {

struct RunSummary
{
  std::string experiment;
  std::string name;
  double wall_seconds = 0.0;
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;  ///< in write order
};

/// Runs a validated experiment and writes <output_dir>/<name>_<diagnostic>.<ext>
/// for each diagnostic. Nothing is written outside output_dir.
RunSummary run_experiment(const ExperimentConfig& cfg);

enum ExitCode : int
{
  exit_ok = 0,
  exit_failure = 1,
  exit_validation = 2,
  exit_divergence = 3,
};

struct RunOptions
{
  std::filesystem::path config;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::filesystem::path> output_override;
};

/// Load, validate, run, and report. Prints a one-line summary to `out` on
/// success and one error line to `err` otherwise; returns the exit code.
int run_from_options(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace gpe
