#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beampred/metrics.hpp"
#include "beampred/predictor.hpp"
#include "beampred/synthgen.hpp"

namespace beampred {

/// Everything a CLI command needs. Layered as defaults < config file <
/// environment (BEAMPRED_<KEY>) < command-line flags.
struct ExperimentConfig {
  std::string scenario_path;  // empty: synthesize from `synth`
  SynthConfig synth = default_synth_config();
  std::vector<std::string> predictors{"nn"};
  PredictorOptions options;
  SplitSpec split;
  std::vector<int> codebook_sizes{64, 32, 16, 8};
  std::vector<double> reliabilities{0.80, 0.90, 0.95, 0.99};
  double gamma = 0.7;
  SavingsMode savings_mode = SavingsMode::Coverage;
  int target_m = 0;  // 0 keeps the scenario's codebook
  std::string out;
  std::string checkpoint;
  std::uint64_t seed = 0;

  /// Copies the master seed into the generator, split and trainer.
  void sync_seeds();
};

inline constexpr const char* kEnvPrefix = "BEAMPRED_";

/// Every key accepted by set_config_value, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses `value` for `key`; throws InvalidConfig on unknown keys or bad values.
void set_config_value(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

/// Flat JSON object of key -> scalar or array.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

void apply_environment(ExperimentConfig& config, const std::string& prefix = kEnvPrefix);

}  // namespace beampred
