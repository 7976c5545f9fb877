#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrt/distribution.hpp"
#include "hrt/problem.hpp"

namespace hrt {

struct Threshold {
  double linear;
  double db;
};

/// One experiment, read from a single JSON document.
///
///   {
///     "components": [{"family": "lognormal", "mu_dB": 0, "sigma_dB": 6, "count": 2}],
///     "thresholds_dB": [15, 20, 25],          // or "thresholds_linear": [...]
///     "samples_is": 100000, "samples_naive": 100000, "seed": 7,
///     "theta_override": 0.5, "confidence_constant": 1.96,
///     "theta_grid": {"start": 0, "stop": 0.98, "step": 0.02},   // or a list
///     "output_dir": "out"
///   }
struct ExperimentConfig {
  std::vector<Distribution> components;  // count-expanded
  std::vector<Threshold> thresholds;
  std::uint64_t samples_is = 100000;
  std::uint64_t samples_naive = 100000;
  std::uint64_t seed = 1;
  std::optional<double> theta_override;
  double confidence_constant = 1.96;
  std::vector<double> theta_grid;
  std::string output_dir = ".";
  std::uint64_t config_hash = 0;  // FNV-1a of the raw document

  [[nodiscard]] SumProblem problem(const Threshold& t) const;
};

/// Throws ConfigError with a line/column or field-path diagnostic.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct RunOptions {
  unsigned workers = 0;
  bool allow_large = false;
};

/// Cap on naive sample counts unless RunOptions::allow_large is set.
inline constexpr std::uint64_t kNaiveSampleCap = 1000000;

struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandOutput {
  std::vector<OutputFile> files;
  std::string summary;      // human-readable, for stdout
  std::string diagnostics;  // warnings, for stderr
  int exit_code = 0;
};

CommandOutput cmd_solve(const ExperimentConfig& config, const RunOptions& options = {});
CommandOutput cmd_ccdf(const ExperimentConfig& config, const RunOptions& options = {});
CommandOutput cmd_freq_table(const ExperimentConfig& config, const RunOptions& options = {});
CommandOutput cmd_efficiency(const ExperimentConfig& config, const RunOptions& options = {});
CommandOutput cmd_theta_sweep(const ExperimentConfig& config, const RunOptions& options = {});
/// Exit code 2 when any estimate misses the oracle by more than 3 standard errors
/// or the oracle itself fails.
CommandOutput cmd_validate(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes every file of `output` into `dir`, creating it if needed.
void write_outputs(const CommandOutput& output, const std::string& dir);

}  // namespace hrt
