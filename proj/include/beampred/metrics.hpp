#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "beampred/types.hpp"

namespace beampred {

/// Probabilities for a batch of samples: one row per sample, one column per beam.
using DistributionMatrix = Eigen::MatrixXd;

/// Fraction of rows whose label is among the k most probable beams.
double topk_accuracy(const DistributionMatrix& dists, const Eigen::VectorXi& labels, int k);

/// Mean over samples of the weakest beam power.
double estimate_noise_power(const Scenario& scenario);

/// Average noise-corrected power ratio between the best and the predicted beam,
/// in dB. Each denominator is floored at 1e-12 times its numerator.
double power_loss_db(std::span<const MeasurementSample> samples,
                     std::span<const int> predicted, double noise_power);

/// Mean number of beams per sample with power >= gamma * best power.
double beamset_size(const Scenario& scenario, double gamma = 0.7);

enum class SavingsMode {
  /// Smallest b whose top-b sets contain the label for a fraction >= r of samples.
  Coverage,
  /// Per sample, smallest b whose top-b probabilities sum above r; averaged.
  ProbabilityMass,
};

struct OverheadSavings {
  double beams = 0.0;    // b(r); an average in ProbabilityMass mode
  double savings = 0.0;  // 1 - b(r) / M
};

OverheadSavings overhead_savings(const DistributionMatrix& dists,
                                 const Eigen::VectorXi& labels, double reliability,
                                 SavingsMode mode = SavingsMode::Coverage);

struct EvaluationReport {
  std::string scenario_id;
  std::string predictor;
  int codebook_size = 0;
  std::map<int, double> top_k_accuracy;  // k = 1..5, capped at M
  double power_loss_db = 0.0;
  double gamma = 0.7;
  double beamset_size = 0.0;
  std::vector<std::pair<double, OverheadSavings>> overhead;  // by reliability
};

/// Every metric for one predictor on one (test) scenario.
EvaluationReport evaluate(const Scenario& test, const std::string& predictor,
                          const DistributionMatrix& dists,
                          std::span<const double> reliabilities, double gamma = 0.7,
                          SavingsMode mode = SavingsMode::Coverage);

}  // namespace beampred
