#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "beampred/types.hpp"

namespace beampred {

enum class GpsNoiseModel { None, IidGaussian, GaussMarkov };

struct GpsNoise {
  GpsNoiseModel model = GpsNoiseModel::None;
  double sigma_m = 3.0;
  double rho = 0.95;  // lag-1 correlation, Gauss-Markov only
};

/// Drive-by past a fixed basestation. Beams tile the azimuth range
/// [sector_start_deg, sector_start_deg + sector_span_deg), clockwise from north.
struct SynthConfig {
  std::string scenario_id = "synthetic";
  int n_samples = 2000;
  int codebook_size = 64;
  PositionFix bs{33.4200, -111.9290};
  PositionFix start;
  PositionFix end;
  double jitter_m = 0.5;
  double sector_start_deg = 225.0;
  double sector_span_deg = 180.0;
  double footprint_sharpness = 0.25;
  double peak_power = 1.0;
  double noise_floor = 1e-3;
  GpsNoise gps;
  double label_noise_prob = 0.0;
  std::uint64_t seed = 0;
};

/// Default street: 60 m long, heading north-east, 80 m from the basestation at
/// its closest point.
SynthConfig default_synth_config();

void validate(const SynthConfig& config);

/// Local east/north displacement applied to a fix (equirectangular).
PositionFix offset_position(const PositionFix& origin, double east_m, double north_m);

/// Bearing from `from` to `to` in degrees, clockwise from north, in [0, 360).
double azimuth_deg(const PositionFix& from, const PositionFix& to);

/// Uniform sector index of the basestation-to-UE azimuth, clamped to [0, M-1].
int azimuth_to_beam(const PositionFix& bs, const PositionFix& ue, int codebook_size,
                    double sector_start_deg, double sector_span_deg);

/// Per-sample (east, north) GPS error in meters. Gauss-Markov follows
/// e_k = rho * e_{k-1} + sqrt(1 - rho^2) * sigma * w_k with e_0 = sigma * w_0,
/// so rho = 0 consumes the same draws as the iid model.
Eigen::Matrix<double, Eigen::Dynamic, 2> gps_offsets(const GpsNoise& noise, int n,
                                                     std::mt19937_64& rng);

Scenario generate(const SynthConfig& config);

}  // namespace beampred
