#include "beampred/synthgen.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace beampred {

namespace {

constexpr double kEarthRadiusM = 6378137.0;
constexpr double kMetersPerDegree = std::numbers::pi * kEarthRadiusM / 180.0;

double meters_per_degree_lon(double lat_deg) {
  return kMetersPerDegree * std::cos(lat_deg * std::numbers::pi / 180.0);
}

// Signed angle difference wrapped into [-180, 180).
double wrap180(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0) w += 360.0;
  return w - 180.0;
}

int circular_distance(int a, int b, int m) {
  const int d = std::abs(a - b) % m;
  return std::min(d, m - d);
}

}  // namespace

SynthConfig default_synth_config() {
  SynthConfig c;
  const double s = std::numbers::sqrt2 / 2.0;
  // Closest point 80 m north-west of the basestation, street running north-east.
  const double cx = -80.0 * s, cy = 80.0 * s;
  c.start = offset_position(c.bs, cx - 30.0 * s, cy - 30.0 * s);
  c.end = offset_position(c.bs, cx + 30.0 * s, cy + 30.0 * s);
  return c;
}

void validate(const SynthConfig& c) {
  if (c.n_samples < 1) fail(ErrorKind::InvalidConfig, "n_samples must be >= 1");
  if (c.codebook_size < 1) fail(ErrorKind::InvalidConfig, "codebook_size must be >= 1");
  if (!(c.sector_span_deg > 0 && c.sector_span_deg <= 360))
    fail(ErrorKind::InvalidConfig, "sector span must lie in (0, 360]");
  if (!(c.gps.sigma_m >= 0) || !(c.jitter_m >= 0))
    fail(ErrorKind::InvalidConfig, "noise scales must be non-negative");
  if (!(c.gps.rho >= 0 && c.gps.rho < 1))
    fail(ErrorKind::InvalidConfig, "Gauss-Markov correlation must lie in [0, 1)");
  if (!(c.label_noise_prob >= 0 && c.label_noise_prob <= 1))
    fail(ErrorKind::InvalidConfig, "label noise probability must lie in [0, 1]");
  if (!(c.noise_floor > 0) || !(c.peak_power > 0) || !(c.footprint_sharpness > 0))
    fail(ErrorKind::InvalidConfig, "noise floor, peak power and sharpness must be positive");
  try {
    validate(c.bs);
    validate(c.start);
    validate(c.end);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidConfig, e.what());
  }
  if (c.start == c.end) fail(ErrorKind::InvalidConfig, "trajectory has zero length");
}

PositionFix offset_position(const PositionFix& origin, double east_m, double north_m) {
  return {origin.lat + north_m / kMetersPerDegree,
          origin.lon + east_m / meters_per_degree_lon(origin.lat)};
}

double azimuth_deg(const PositionFix& from, const PositionFix& to) {
  const double north = (to.lat - from.lat) * kMetersPerDegree;
  const double east = (to.lon - from.lon) * meters_per_degree_lon(from.lat);
  if (north == 0.0 && east == 0.0)
    fail(ErrorKind::InvalidInput, "azimuth undefined for coincident positions");
  double az = std::atan2(east, north) * 180.0 / std::numbers::pi;
  return az < 0 ? az + 360.0 : az;
}

int azimuth_to_beam(const PositionFix& bs, const PositionFix& ue, int codebook_size,
                    double sector_start_deg, double sector_span_deg) {
  if (codebook_size < 1 || !(sector_span_deg > 0 && sector_span_deg <= 360))
    fail(ErrorKind::InvalidConfig, "invalid codebook or sector span");
  const double half = sector_span_deg / 2.0;
  // Offset from the span start, measured through the span centre so that
  // azimuths on either side of the span clamp to the nearer edge.
  const double from_start =
      wrap180(azimuth_deg(bs, ue) - (sector_start_deg + half)) + half;
  const double t = std::clamp(from_start / sector_span_deg, 0.0, 1.0);
  return std::min(static_cast<int>(std::floor(t * codebook_size)), codebook_size - 1);
}

Eigen::Matrix<double, Eigen::Dynamic, 2> gps_offsets(const GpsNoise& noise, int n,
                                                     std::mt19937_64& rng) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> e = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(n, 2);
  if (noise.model == GpsNoiseModel::None || n == 0) return e;
  std::normal_distribution<double> w(0.0, 1.0);
  const double rho = noise.model == GpsNoiseModel::GaussMarkov ? noise.rho : 0.0;
  const double innovation = std::sqrt(1.0 - rho * rho) * noise.sigma_m;
  for (int k = 0; k < n; ++k) {
    const double we = w(rng);
    const double wn = w(rng);
    if (k == 0) {
      e(k, 0) = noise.sigma_m * we;
      e(k, 1) = noise.sigma_m * wn;
    } else {
      e(k, 0) = rho * e(k - 1, 0) + innovation * we;
      e(k, 1) = rho * e(k - 1, 1) + innovation * wn;
    }
  }
  return e;
}

Scenario generate(const SynthConfig& config) {
  validate(config);
  const int n = config.n_samples;
  const int m = config.codebook_size;

  // Independent streams so toggling one noise source leaves the others intact.
  std::seed_seq seq{config.seed, std::uint64_t{0xbea3}};
  std::array<std::uint64_t, 3> streams{};
  seq.generate(streams.begin(), streams.end());
  std::mt19937_64 jitter_rng(streams[0]);
  std::mt19937_64 gps_rng(streams[1]);
  std::mt19937_64 label_rng(streams[2]);

  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto gps = gps_offsets(config.gps, n, gps_rng);

  const double mean_lat = 0.5 * (config.start.lat + config.end.lat);
  const double lon_scale = meters_per_degree_lon(mean_lat);

  Scenario scenario{config.scenario_id, m, {}};
  scenario.samples.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.5 : static_cast<double>(k) / (n - 1);
    PositionFix truth{config.start.lat + t * (config.end.lat - config.start.lat),
                      config.start.lon + t * (config.end.lon - config.start.lon)};
    const double je = config.jitter_m * jitter(jitter_rng);
    const double jn = config.jitter_m * jitter(jitter_rng);
    truth.lat += jn / kMetersPerDegree;
    truth.lon += je / lon_scale;

    int peak = azimuth_to_beam(config.bs, truth, m, config.sector_start_deg,
                               config.sector_span_deg);
    const bool perturb = unit(label_rng) < config.label_noise_prob;
    const bool upward = unit(label_rng) < 0.5;
    if (perturb) peak = (peak + (upward ? 1 : m - 1)) % m;

    PowerVector powers(m);
    for (int b = 0; b < m; ++b)
      powers(b) = config.noise_floor +
                  config.peak_power *
                      std::exp(-config.footprint_sharpness * circular_distance(b, peak, m));

    const PositionFix reported{truth.lat + gps(k, 1) / kMetersPerDegree,
                               truth.lon + gps(k, 0) / lon_scale};
    scenario.samples.push_back({reported, std::move(powers), k});
  }
  return scenario;
}

}  // namespace beampred
