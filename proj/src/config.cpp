#include "beampred/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace beampred {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorKind::InvalidConfig, "invalid value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad_value(key, s);
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& s) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad_value(key, s);
  return v;
}

std::vector<std::string> to_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& s) {
  std::vector<int> out;
  for (const auto& item : to_list(s)) out.push_back(to_int<int>(key, item));
  if (out.empty()) bad_value(key, s);
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : to_list(s)) out.push_back(to_double(key, item));
  if (out.empty()) bad_value(key, s);
  return out;
}

#define REAL(field) [](ExperimentConfig& c, const std::string& v) { c.field = to_double(#field, v); }
#define INT(field) [](ExperimentConfig& c, const std::string& v) { c.field = to_int<int>(#field, v); }

const std::vector<std::pair<std::string, Setter>>& registry() {
  static const std::vector<std::pair<std::string, Setter>> table{
      {"scenario", [](auto& c, const auto& v) { c.scenario_path = v; }},
      {"scenario_id", [](auto& c, const auto& v) { c.synth.scenario_id = v; }},
      {"n_samples", INT(synth.n_samples)},
      {"codebook_size", INT(synth.codebook_size)},
      {"bs_lat", REAL(synth.bs.lat)},
      {"bs_lon", REAL(synth.bs.lon)},
      {"start_lat", REAL(synth.start.lat)},
      {"start_lon", REAL(synth.start.lon)},
      {"end_lat", REAL(synth.end.lat)},
      {"end_lon", REAL(synth.end.lon)},
      {"jitter_m", REAL(synth.jitter_m)},
      {"sector_start_deg", REAL(synth.sector_start_deg)},
      {"sector_span_deg", REAL(synth.sector_span_deg)},
      {"sharpness", REAL(synth.footprint_sharpness)},
      {"peak_power", REAL(synth.peak_power)},
      {"noise_floor", REAL(synth.noise_floor)},
      {"gps_noise",
       [](auto& c, const auto& v) {
         if (v == "none")
           c.synth.gps.model = GpsNoiseModel::None;
         else if (v == "iid")
           c.synth.gps.model = GpsNoiseModel::IidGaussian;
         else if (v == "gauss_markov")
           c.synth.gps.model = GpsNoiseModel::GaussMarkov;
         else
           bad_value("gps_noise", v);
       }},
      {"gps_sigma_m", REAL(synth.gps.sigma_m)},
      {"gps_rho", REAL(synth.gps.rho)},
      {"label_noise_prob", REAL(synth.label_noise_prob)},
      {"seed", [](auto& c, const auto& v) { c.seed = to_int<std::uint64_t>("seed", v); }},
      {"predictor",
       [](auto& c, const auto& v) {
         c.predictors = to_list(v);
         if (c.predictors.empty()) bad_value("predictor", v);
         for (const auto& p : c.predictors) parse_predictor(p);
       }},
      {"lt_candidates",
       [](auto& c, const auto& v) { c.options.lt_candidates = to_int_list("lt_candidates", v); }},
      {"knn_candidates",
       [](auto& c, const auto& v) {
         c.options.knn_candidates = to_int_list("knn_candidates", v);
       }},
      {"batch_size", INT(options.nn.batch_size)},
      {"lr", REAL(options.nn.lr)},
      {"decay_epochs",
       [](auto& c, const auto& v) { c.options.nn.decay_epochs = to_int_list("decay_epochs", v); }},
      {"decay_factor", REAL(options.nn.decay_factor)},
      {"epochs", INT(options.nn.epochs)},
      {"input_bins", INT(options.nn.input_bins)},
      {"hidden", [](auto& c, const auto& v) { c.options.nn.hidden = to_int_list("hidden", v); }},
      {"train_frac", REAL(split.train_frac)},
      {"val_frac", REAL(split.val_frac)},
      {"test_frac", REAL(split.test_frac)},
      {"codebook_sizes",
       [](auto& c, const auto& v) { c.codebook_sizes = to_int_list("codebook_sizes", v); }},
      {"reliability",
       [](auto& c, const auto& v) {
         c.reliabilities = to_double_list("reliability", v);
         for (double r : c.reliabilities)
           if (!(r > 0 && r < 1)) bad_value("reliability", v);
       }},
      {"gamma", REAL(gamma)},
      {"savings_mode",
       [](auto& c, const auto& v) {
         if (v == "coverage")
           c.savings_mode = SavingsMode::Coverage;
         else if (v == "mass")
           c.savings_mode = SavingsMode::ProbabilityMass;
         else
           bad_value("savings_mode", v);
       }},
      {"target_m", INT(target_m)},
      {"out", [](auto& c, const auto& v) { c.out = v; }},
      {"checkpoint", [](auto& c, const auto& v) { c.checkpoint = v; }},
  };
  return table;
}

#undef REAL
#undef INT

}  // namespace

void ExperimentConfig::sync_seeds() {
  synth.seed = seed;
  split.seed = seed;
  options.nn.seed = seed;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : registry()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& config, const std::string& key,
                      const std::string& value) {
  for (const auto& [name, setter] : registry())
    if (name == key) return setter(config, value);
  fail(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::InvalidConfig, "cannot read config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::InvalidConfig, "config file must hold a JSON object");

  const auto scalar = [&](const std::string& key, const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    fail(ErrorKind::InvalidConfig, "config key '" + key + "' must be a scalar or array");
  };
  for (const auto& [key, value] : doc.items()) {
    std::string text;
    if (value.is_array()) {
      for (const auto& item : value) text += (text.empty() ? "" : ",") + scalar(key, item);
    } else {
      text = scalar(key, value);
    }
    set_config_value(config, key, text);
  }
}

void apply_environment(ExperimentConfig& config, const std::string& prefix) {
  for (const auto& key : config_keys()) {
    std::string var = prefix;
    for (char ch : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* value = std::getenv(var.c_str())) set_config_value(config, key, value);
  }
}

}  // namespace beampred
