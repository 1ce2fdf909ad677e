#include "beampred/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace beampred::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  if (path.empty()) fail(ErrorKind::InvalidConfig, "--out is required");
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::InvalidConfig, "cannot write " + path.string());
  return os;
}

PredictorKind single_predictor(const ExperimentConfig& config) {
  if (config.predictors.size() != 1)
    fail(ErrorKind::InvalidConfig, "train needs exactly one --predictor");
  return parse_predictor(config.predictors.front());
}

std::vector<PredictorKind> predictor_list(const ExperimentConfig& config) {
  if (config.predictors.empty()) fail(ErrorKind::InvalidConfig, "no predictor selected");
  std::vector<PredictorKind> kinds;
  for (const auto& p : config.predictors) kinds.push_back(parse_predictor(p));
  return kinds;
}

struct Trained {
  FittedPredictor predictor;
  SplitResult parts;
};

Trained split_and_fit(PredictorKind kind, const Scenario& scenario,
                      const ExperimentConfig& config) {
  Trained t{{}, split(scenario, config.split)};
  t.predictor = fit_predictor(kind, t.parts.train, t.parts.val, config.options);
  return t;
}

EvaluationReport score(const Trained& t, const ExperimentConfig& config) {
  return evaluate(t.parts.test, predictor_name(t.predictor.kind),
                  predict(t.predictor, t.parts.test), config.reliabilities, config.gamma,
                  config.savings_mode);
}

}  // namespace

Scenario load_input(const ExperimentConfig& config) {
  Scenario scenario = config.scenario_path.empty() ? generate(config.synth)
                                                   : load_scenario(config.scenario_path);
  if (config.target_m > 0) scenario = reduce_codebook(scenario, config.target_m);
  return scenario;
}

void cmd_generate(const ExperimentConfig& config) {
  const Scenario scenario = generate(config.synth);
  auto os = open_output(config.out);
  write_scenario_csv(os, scenario);
}

void cmd_train(const ExperimentConfig& config) {
  const PredictorKind kind = single_predictor(config);
  if (config.out.empty()) fail(ErrorKind::InvalidConfig, "--out directory is required");
  const Scenario scenario = load_input(config);
  const Trained t = split_and_fit(kind, scenario, config);

  const fs::path dir(config.out);
  auto ck = open_output(dir / "model.ckpt");
  write_checkpoint(ck, {t.predictor, provenance_of(t.parts, config.split)});
  auto hist = open_output(dir / "history.csv");
  write_history_csv(hist, t.predictor);
}

void cmd_evaluate(const ExperimentConfig& config) {
  if (config.checkpoint.empty()) fail(ErrorKind::InvalidConfig, "--checkpoint is required");
  const Checkpoint ck = load_checkpoint(config.checkpoint);
  const Scenario scenario = load_input(config);
  const int m = codebook_size(ck.predictor);
  if (scenario.codebook_size != m)
    fail(ErrorKind::InvalidInput, "checkpoint was trained for M = " + std::to_string(m) +
                                      " but the scenario has M = " +
                                      std::to_string(scenario.codebook_size));

  // Rebuild the training-time split and prove we hold the same test samples.
  const SplitResult parts = split(scenario, ck.split.spec);
  const SplitProvenance now = provenance_of(parts, ck.split.spec);
  if (now.scenario_id != ck.split.scenario_id || now.train_size != ck.split.train_size ||
      now.val_size != ck.split.val_size || now.test_size != ck.split.test_size ||
      now.test_digest != ck.split.test_digest)
    fail(ErrorKind::InvalidInput,
         "scenario does not reproduce the checkpoint's split; refusing to evaluate");

  const auto report =
      evaluate(parts.test, predictor_name(ck.predictor.kind), predict(ck.predictor, parts.test),
               config.reliabilities, config.gamma, config.savings_mode);
  auto os = open_output(config.out);
  write_report_csv(os, {report});
}

void cmd_sweep_codebook(const ExperimentConfig& config) {
  const auto kinds = predictor_list(config);
  const Scenario scenario = load_input(config);
  if (config.codebook_sizes.empty()) fail(ErrorKind::InvalidConfig, "no codebook sizes");
  for (int m : config.codebook_sizes)
    if (m < 1 || scenario.codebook_size % m != 0)
      fail(ErrorKind::InvalidConfig, "codebook size " + std::to_string(m) + " does not divide " +
                                         std::to_string(scenario.codebook_size));
  auto os = open_output(config.out);
  os << "scenario,predictor,M,acc_top1,power_loss_db,beamset_" << format_level(config.gamma)
     << '\n';
  for (PredictorKind kind : kinds) {
    for (int m : config.codebook_sizes) {
      const Trained t = split_and_fit(kind, reduce_codebook(scenario, m), config);
      const auto rep = score(t, config);
      os << scenario.scenario_id << ',' << predictor_name(kind) << ',' << m << ','
         << format_double(rep.top_k_accuracy.at(1)) << ',' << format_double(rep.power_loss_db)
         << ',' << format_double(rep.beamset_size) << '\n';
    }
  }
}

void cmd_sweep_reliability(const ExperimentConfig& config) {
  const auto kinds = predictor_list(config);
  const Scenario scenario = load_input(config);
  auto os = open_output(config.out);
  os << "scenario,predictor,reliability,outage,beams,savings\n";
  for (PredictorKind kind : kinds) {
    const Trained t = split_and_fit(kind, scenario, config);
    const auto rep = score(t, config);
    for (const auto& [r, s] : rep.overhead)
      os << scenario.scenario_id << ',' << predictor_name(kind) << ',' << format_level(r) << ','
         << format_level(1.0 - r) << ',' << format_double(s.beams) << ','
         << format_double(s.savings) << '\n';
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position-aided mmWave beam prediction"};
  app.require_subcommand(1);

  std::string config_file;
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> verbs{
      {"generate", "Write a synthetic scenario CSV"},
      {"train", "Fit a predictor; write checkpoint and history"},
      {"evaluate", "Score a checkpoint on its test split"},
      {"sweep-codebook", "Top-1 accuracy across codebook sizes"},
      {"sweep-reliability", "Overhead savings across reliability levels"},
  };
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file, "Flat JSON config file");
    for (const auto& key : config_keys()) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      const std::string names = flag == key ? "--" + key : "--" + flag + ",--" + key;
      sub->add_option(names, flags[key], "Overrides config key " + key);
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::InvalidConfig);
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig config;
    if (!config_file.empty()) apply_config_file(config, config_file);
    apply_environment(config);
    for (const auto& key : config_keys()) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app.get_subcommands().front()->count("--" + flag) > 0)
        set_config_value(config, key, flags[key]);
    }
    config.sync_seeds();

    if (verb == "generate")
      cmd_generate(config);
    else if (verb == "train")
      cmd_train(config);
    else if (verb == "evaluate")
      cmd_evaluate(config);
    else if (verb == "sweep-codebook")
      cmd_sweep_codebook(config);
    else
      cmd_sweep_reliability(config);
  } catch (const Error& e) {
    err << "error: " << verb << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << verb << ": " << e.what() << '\n';
    return exit_code(ErrorKind::Internal);
  }
  return 0;
}

}  // namespace beampred::cli
