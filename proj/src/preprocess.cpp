#include "beampred/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace beampred {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// floor(c * bins) with the result corrected so that idx / bins <= c holds
// under the same floating-point division used to rebuild the coordinate.
int bin_index(double c, int bins) {
  int idx = static_cast<int>(std::floor(c * bins));
  if (idx > 0 && static_cast<double>(idx) / bins > c) --idx;
  if (idx + 1 < bins && static_cast<double>(idx + 1) / bins <= c) ++idx;
  return std::clamp(idx, 0, bins - 1);
}

std::size_t cut(std::size_t k, double frac) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(k) * frac + 1e-9));
}

}  // namespace

NormParams fit_norm(std::span<const MeasurementSample> samples) {
  if (samples.size() < 2)
    fail(ErrorKind::InsufficientData, "normalization needs at least 2 samples");
  NormParams p{samples[0].position.lat, samples[0].position.lat,
               samples[0].position.lon, samples[0].position.lon};
  for (const auto& s : samples) {
    p.lat_min = std::min(p.lat_min, s.position.lat);
    p.lat_max = std::max(p.lat_max, s.position.lat);
    p.lon_min = std::min(p.lon_min, s.position.lon);
    p.lon_max = std::max(p.lon_max, s.position.lon);
  }
  if (!(p.lat_min < p.lat_max) || !(p.lon_min < p.lon_max))
    fail(ErrorKind::DegenerateRange, "latitude or longitude range is zero");
  return p;
}

NormalizedPosition apply_norm(const NormParams& params, const PositionFix& fix) {
  return {clamp01((fix.lat - params.lat_min) / (params.lat_max - params.lat_min)),
          clamp01((fix.lon - params.lon_min) / (params.lon_max - params.lon_min))};
}

NormalizedPosition quantize_position(NormalizedPosition pos, int bins) {
  if (bins < 1) fail(ErrorKind::InvalidConfig, "quantization bins must be >= 1");
  return {static_cast<double>(bin_index(clamp01(pos.x), bins)) / bins,
          static_cast<double>(bin_index(clamp01(pos.y), bins)) / bins};
}

SplitResult split(const Scenario& scenario, const SplitSpec& spec) {
  if (!(spec.train_frac > 0 && spec.val_frac > 0 && spec.test_frac > 0) ||
      std::abs(spec.train_frac + spec.val_frac + spec.test_frac - 1.0) > 1e-9)
    fail(ErrorKind::InvalidConfig, "split fractions must be positive and sum to 1");

  const std::size_t k = scenario.samples.size();
  const std::size_t train_end = cut(k, spec.train_frac);
  const std::size_t val_end = std::min(k, cut(k, spec.train_frac + spec.val_frac));
  if (train_end == 0 || val_end <= train_end || val_end >= k)
    fail(ErrorKind::InsufficientData,
         "split of " + std::to_string(k) + " samples leaves an empty part");

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  SplitResult out;
  for (Scenario* part : {&out.train, &out.val, &out.test}) {
    part->scenario_id = scenario.scenario_id;
    part->codebook_size = scenario.codebook_size;
  }
  out.train.samples.reserve(train_end);
  out.val.samples.reserve(val_end - train_end);
  out.test.samples.reserve(k - val_end);
  for (std::size_t i = 0; i < k; ++i) {
    Scenario& part = i < train_end ? out.train : i < val_end ? out.val : out.test;
    part.samples.push_back(scenario.samples[order[i]]);
  }
  return out;
}

Scenario reduce_codebook(const Scenario& scenario, int target_m) {
  const int m = scenario.codebook_size;
  if (target_m < 1 || m % target_m != 0)
    fail(ErrorKind::InvalidConfig, "target codebook size " + std::to_string(target_m) +
                                       " does not divide " + std::to_string(m));
  const int stride = m / target_m;
  Scenario out{scenario.scenario_id, target_m, {}};
  out.samples.reserve(scenario.samples.size());
  for (const auto& s : scenario.samples) {
    MeasurementSample r{s.position, PowerVector(target_m), s.sample_id};
    for (int j = 0; j < target_m; ++j) r.powers(j) = s.powers(j * stride);
    out.samples.push_back(std::move(r));
  }
  return out;
}

PreparedSet prepare(const Scenario& scenario, const NormParams& params,
                    int quantize_bins) {
  const auto k = static_cast<Eigen::Index>(scenario.samples.size());
  PreparedSet set;
  set.codebook_size = scenario.codebook_size;
  set.positions.resize(k, 2);
  set.labels.resize(k);
  set.sample_ids.reserve(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& s = scenario.samples[i];
    NormalizedPosition p = apply_norm(params, s.position);
    if (quantize_bins > 0) p = quantize_position(p, quantize_bins);
    set.positions(i, 0) = p.x;
    set.positions(i, 1) = p.y;
    set.labels(i) = static_cast<int>(best_beam(s.powers));
    set.sample_ids.push_back(s.sample_id);
  }
  return set;
}

}  // namespace beampred
