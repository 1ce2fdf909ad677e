#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "beampred/metrics.hpp"
#include "beampred/predictor.hpp"

namespace beampred {

/// Shortest-exact decimal text for a double (round-trips bit for bit).
std::string format_double(double v);

// Scenario CSV: header `scenario_id,sample_id,lat,lon,p_1,...,p_M`, one row
// per sample, linear-scale powers.
void write_scenario_csv(std::ostream& os, const Scenario& scenario);
Scenario read_scenario_csv(std::istream& is);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

/// Split provenance stored with every checkpoint so evaluation can prove it
/// only touches the held-out test samples.
struct SplitProvenance {
  SplitSpec spec;
  std::string scenario_id;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
  std::uint64_t test_digest = 0;
};

/// FNV-1a over every sample (id, position bits, power bits), ordered by id.
std::uint64_t sample_digest(const Scenario& scenario);
SplitProvenance provenance_of(const SplitResult& parts, const SplitSpec& spec);

struct Checkpoint {
  FittedPredictor predictor;
  SplitProvenance split;
};

inline constexpr const char* kCheckpointMagic = "beampred-checkpoint";
inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(std::ostream& os, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& is);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Per-epoch (NN) or per-candidate (LT/KNN) training history.
void write_history_csv(std::ostream& os, const FittedPredictor& predictor);

/// Report columns: scenario, predictor, acc_top1..acc_top5, power_loss_db,
/// beamset_<gamma>, savings_at_<r>...
void write_report_csv(std::ostream& os, const std::vector<EvaluationReport>& reports);

/// Short decimal label for levels and column names, e.g. 0.95 -> "0.95",
/// 1 - 0.8 -> "0.2".
std::string format_level(double v);

}  // namespace beampred
