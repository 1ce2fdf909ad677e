#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beampred/types.hpp"

namespace beampred {

struct NormParams {
  double lat_min = 0.0;
  double lat_max = 1.0;
  double lon_min = 0.0;
  double lon_max = 1.0;

  friend bool operator==(const NormParams&, const NormParams&) = default;
};

struct SplitSpec {
  double train_frac = 0.6;
  double val_frac = 0.2;
  double test_frac = 0.2;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Scenario train;
  Scenario val;
  Scenario test;
};

/// Predictor-ready view of a scenario: one normalized position per row,
/// plus the derived best-beam label of each sample.
struct PreparedSet {
  Eigen::Matrix<double, Eigen::Dynamic, 2> positions;
  Eigen::VectorXi labels;
  std::vector<std::int64_t> sample_ids;
  int codebook_size = 0;

  Eigen::Index size() const { return labels.size(); }
  NormalizedPosition position(Eigen::Index k) const {
    return {positions(k, 0), positions(k, 1)};
  }
};

/// Coordinate-wise min/max. Throws DegenerateRange when either axis is flat.
NormParams fit_norm(std::span<const MeasurementSample> samples);

/// Min-max map into [0,1]; fixes outside the fitted box are clamped.
NormalizedPosition apply_norm(const NormParams& params, const PositionFix& fix);

/// Snaps each coordinate to floor(c * bins) / bins, keeping 1.0 inside the
/// last bin.
NormalizedPosition quantize_position(NormalizedPosition pos, int bins = 200);

/// Seeded shuffle followed by a contiguous cut at floor(K*train) and
/// floor(K*(train+val)).
SplitResult split(const Scenario& scenario, const SplitSpec& spec);

/// Keeps every (M / target_m)-th beam starting at beam 0.
Scenario reduce_codebook(const Scenario& scenario, int target_m);

/// Normalizes every sample with `params` and labels it with best_beam.
/// `quantize_bins` > 0 additionally applies quantize_position.
PreparedSet prepare(const Scenario& scenario, const NormParams& params,
                    int quantize_bins = 0);

}  // namespace beampred
