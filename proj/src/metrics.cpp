#include "beampred/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace beampred {

namespace {

void check_batch(const DistributionMatrix& dists, const Eigen::VectorXi& labels) {
  if (dists.rows() != labels.size())
    fail(ErrorKind::InvalidInput, "got " + std::to_string(dists.rows()) +
                                      " distributions for " +
                                      std::to_string(labels.size()) + " labels");
  if (labels.size() == 0) fail(ErrorKind::InsufficientData, "no samples to score");
  if ((labels.array() < 0).any() || (labels.array() >= dists.cols()).any())
    fail(ErrorKind::InvalidInput, "label outside the codebook");
}

// Histogram of label ranks: hist[r] counts samples whose label sits at rank r.
std::vector<Eigen::Index> rank_histogram(const DistributionMatrix& dists,
                                         const Eigen::VectorXi& labels) {
  std::vector<Eigen::Index> hist(dists.cols(), 0);
  for (Eigen::Index k = 0; k < dists.rows(); ++k)
    ++hist[beam_rank(dists.row(k).transpose(), labels(k))];
  return hist;
}

}  // namespace

double topk_accuracy(const DistributionMatrix& dists, const Eigen::VectorXi& labels,
                     int k) {
  check_batch(dists, labels);
  if (k < 1 || k > dists.cols())
    fail(ErrorKind::InvalidInput, "k = " + std::to_string(k) + " outside [1, " +
                                      std::to_string(dists.cols()) + "]");
  const auto hist = rank_histogram(dists, labels);
  Eigen::Index hits = 0;
  for (int r = 0; r < k; ++r) hits += hist[r];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double estimate_noise_power(const Scenario& scenario) {
  if (scenario.samples.empty())
    fail(ErrorKind::InsufficientData, "noise estimate needs samples");
  double sum = 0.0;
  for (const auto& s : scenario.samples) sum += s.powers.minCoeff();
  return sum / static_cast<double>(scenario.samples.size());
}

double power_loss_db(std::span<const MeasurementSample> samples,
                     std::span<const int> predicted, double noise_power) {
  if (samples.size() != predicted.size())
    fail(ErrorKind::InvalidInput, "power loss needs one prediction per sample");
  if (samples.empty()) fail(ErrorKind::InsufficientData, "power loss needs samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& p = samples[k].powers;
    if (predicted[k] < 0 || predicted[k] >= p.size())
      fail(ErrorKind::InvalidInput, "predicted beam outside the codebook");
    const double best = p.maxCoeff() - noise_power;
    if (!(best > 0))
      fail(ErrorKind::InvalidNoise, "noise power is not below the best-beam power of sample " +
                                        std::to_string(samples[k].sample_id));
    const double chosen = std::max(p(predicted[k]) - noise_power, 1e-12 * best);
    sum += best / chosen;
  }
  return 10.0 * std::log10(sum / static_cast<double>(samples.size()));
}

double beamset_size(const Scenario& scenario, double gamma) {
  if (!(gamma > 0 && gamma <= 1))
    fail(ErrorKind::InvalidConfig, "gamma must lie in (0, 1]");
  if (scenario.samples.empty())
    fail(ErrorKind::InsufficientData, "beamset size needs samples");
  double total = 0.0;
  for (const auto& s : scenario.samples)
    total += static_cast<double>((s.powers.array() >= gamma * s.powers.maxCoeff()).count());
  return total / static_cast<double>(scenario.samples.size());
}

OverheadSavings overhead_savings(const DistributionMatrix& dists,
                                 const Eigen::VectorXi& labels, double reliability,
                                 SavingsMode mode) {
  check_batch(dists, labels);
  if (!(reliability > 0 && reliability < 1))
    fail(ErrorKind::InvalidConfig, "reliability must lie in (0, 1)");
  const auto m = dists.cols();
  const auto n = labels.size();

  double beams = 0.0;
  if (mode == SavingsMode::Coverage) {
    const auto hist = rank_histogram(dists, labels);
    // Same fraction as topk_accuracy(dists, labels, b).
    const auto coverage = [n](Eigen::Index c) {
      return static_cast<double>(c) / static_cast<double>(n);
    };
    Eigen::Index covered = 0;
    Eigen::Index b = 0;
    while (b < m) {
      covered += hist[b++];
      if (coverage(covered) >= reliability) break;
    }
    if (coverage(covered) < reliability)
      fail(ErrorKind::Internal, "full codebook does not reach the requested reliability");
    beams = static_cast<double>(b);
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto order = top_k_beams(dists.row(k).transpose(), static_cast<int>(m));
      double mass = 0.0;
      Eigen::Index b = 0;
      while (b < m && !(mass > reliability)) mass += dists(k, order[b++]);
      beams += static_cast<double>(b);
    }
    beams /= static_cast<double>(n);
  }
  return {beams, 1.0 - beams / static_cast<double>(m)};
}

EvaluationReport evaluate(const Scenario& test, const std::string& predictor,
                          const DistributionMatrix& dists,
                          std::span<const double> reliabilities, double gamma,
                          SavingsMode mode) {
  const auto k = static_cast<Eigen::Index>(test.samples.size());
  if (dists.rows() != k || dists.cols() != test.codebook_size)
    fail(ErrorKind::InvalidInput, "distribution matrix does not match the scenario");
  Eigen::VectorXi labels(k);
  std::vector<int> predicted(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    labels(i) = static_cast<int>(best_beam(test.samples[i].powers));
    predicted[i] = top_k_beams(dists.row(i).transpose(), 1).front();
  }

  EvaluationReport report;
  report.scenario_id = test.scenario_id;
  report.predictor = predictor;
  report.codebook_size = test.codebook_size;
  for (int top = 1; top <= std::min(5, test.codebook_size); ++top)
    report.top_k_accuracy[top] = topk_accuracy(dists, labels, top);
  report.power_loss_db = power_loss_db(test.samples, predicted, estimate_noise_power(test));
  report.gamma = gamma;
  report.beamset_size = beamset_size(test, gamma);
  for (double r : reliabilities)
    report.overhead.emplace_back(r, overhead_savings(dists, labels, r, mode));
  return report;
}

}  // namespace beampred
