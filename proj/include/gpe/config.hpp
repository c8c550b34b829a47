#pragma once

// Experiment configuration: a JSON document validated in full before any
// computation. Unknown keys anywhere are rejected. See README for the schema.

#include "gpe/dynamics.hpp"
#include "gpe/records.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gpe {

enum class Experiment
{
  simulate,
  kato_scan,
  smoothing,
  attainable,
  weak_limit,
  convergence,
};

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);

/// Control law as written in the config. Random draws are resolved against
/// the experiment seed when the SimConfig is materialized.
struct ControlSpec
{
  enum class Kind
  {
    zero,
    piecewise_constant,
    sampled,
    random_piecewise,
    sinusoid,
  };

  Kind kind = Kind::zero;
  std::vector<double> values;
  int pieces = 16;
  double norm = 1.0;  ///< random_piecewise: exact L^r norm
  double r = 2.0;
  double amplitude = 0.0;
  int frequency = 0;
  std::shared_ptr<const ControlSpec> base;  ///< sinusoid
};

struct StrichartzRequest
{
  double q = 4.0;
  double r = kInfinity;
  double s = 0.0;
  bool whitelisted = false;
};

struct KatoScanParams
{
  double beta = 0.45;
  int k_max = 64;
  double t0 = -6.283185307179586;
  double t1 = 6.283185307179586;
  int n_time = 256;
};

struct SmoothingParams
{
  int k = 0;
  double beta = 0.4;
  double alpha = 0.25;
};

struct AttainableParams
{
  int n_samples = 64;
  double control_l2 = 1.0;
  int k = 0;
  double beta = 0.4;
  int pieces = 16;
  std::vector<int> cutoff_modes;  ///< per-axis mode indices; empty = N/4, N/2, 3N/4
};

struct WeakLimitParams
{
  std::vector<int> n_list{1, 2, 4, 8, 16, 32, 64};
  double amplitude = 1.0;
  double s = 0.0;
};

struct ConvergenceParams
{
  std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
  int ref_divisor = 16;
};

struct ExperimentConfig
{
  std::string name;
  Experiment experiment = Experiment::simulate;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  OutputFormat format = OutputFormat::csv;

  SimConfig sim;  ///< control and random seeds are filled in by materialize()
  ControlSpec control;
  std::optional<std::uint64_t> initial_seed;  ///< explicit initial_state.seed
  std::vector<StrichartzRequest> strichartz;

  KatoScanParams kato;
  SmoothingParams smoothing;
  AttainableParams attainable;
  WeakLimitParams weak_limit;
  ConvergenceParams convergence;

  /// The simulation config with controls drawn from `seed`.
  SimConfig materialize() const;

  /// Every check that can be made without computing; throws ValidationError.
  void validate() const;
};

/// Parses and validates. Throws ValidationError naming the offending field.
ExperimentConfig parse_experiment_config(std::string_view json_text);

/// Reads the file (IoError when unreadable), then parses and validates.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace gpe
