#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "beampred/config.hpp"
#include "beampred/io.hpp"

namespace beampred::cli {

/// Scenario CSV at config.out.
void cmd_generate(const ExperimentConfig& config);

/// Writes <out>/model.ckpt and <out>/history.csv for the single selected predictor.
void cmd_train(const ExperimentConfig& config);

/// Report CSV at config.out, computed on the checkpoint's test split only.
void cmd_evaluate(const ExperimentConfig& config);

/// Top-1 accuracy per (scenario, predictor, M) at config.out.
void cmd_sweep_codebook(const ExperimentConfig& config);

/// Overhead savings per (scenario, predictor, reliability) at config.out.
void cmd_sweep_reliability(const ExperimentConfig& config);

/// Scenario named by config.scenario_path, or synthesized from config.synth;
/// reduced to config.target_m when set.
Scenario load_input(const ExperimentConfig& config);

/// Parses `args` (without the program name), runs the verb and returns the
/// process exit code. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beampred::cli
