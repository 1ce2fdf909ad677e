#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "beampred/error.hpp"

namespace beampred {

/// Raw GNSS fix in decimal degrees.
struct PositionFix {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const PositionFix&, const PositionFix&) = default;
};

/// Min-max normalized position; both coordinates live in [0, 1].
struct NormalizedPosition {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const NormalizedPosition&,
                         const NormalizedPosition&) = default;
};

/// Linear-scale received power per beam, index 0..M-1.
using PowerVector = Eigen::VectorXd;

/// Probability per beam. Rows of a K x M matrix when batched.
using BeamDistribution = Eigen::VectorXd;

struct MeasurementSample {
  PositionFix position;
  PowerVector powers;
  std::int64_t sample_id = 0;
};

struct Scenario {
  std::string scenario_id;
  int codebook_size = 0;
  std::vector<MeasurementSample> samples;
};

inline void validate(const PositionFix& fix) {
  if (!(fix.lat >= -90.0 && fix.lat <= 90.0) ||
      !(fix.lon >= -180.0 && fix.lon <= 180.0))
    fail(ErrorKind::InvalidInput, "position out of range: lat " +
                                      std::to_string(fix.lat) + ", lon " +
                                      std::to_string(fix.lon));
}

template <typename Derived>
void validate_powers(const Eigen::MatrixBase<Derived>& powers) {
  if (powers.size() == 0)
    fail(ErrorKind::InvalidInput, "power vector is empty");
  if (!powers.allFinite() || (powers.array() < 0).any())
    fail(ErrorKind::InvalidInput, "power vector has negative or non-finite entries");
  if (!(powers.array() > 0).any())
    fail(ErrorKind::InvalidInput, "power vector is all zero");
}

/// Checks shared codebook size and unique sample ids.
void validate(const Scenario& scenario);

/// Index of the strongest beam; ties go to the lowest index.
template <typename Derived>
Eigen::Index best_beam(const Eigen::MatrixBase<Derived>& powers) {
  validate_powers(powers);
  Eigen::Index best = 0;
  for (Eigen::Index m = 1; m < powers.size(); ++m)
    if (powers(m) > powers(best)) best = m;
  return best;
}

/// The k most probable beams, most probable first. Equal probabilities are
/// ordered by beam index so the result is deterministic.
template <typename Derived>
std::vector<int> top_k_beams(const Eigen::MatrixBase<Derived>& probs, int k) {
  const int m = static_cast<int>(probs.size());
  if (k < 1 || k > m)
    fail(ErrorKind::InvalidInput,
         "k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      if (probs(a) != probs(b)) return probs(a) > probs(b);
                      return a < b;
                    });
  order.resize(k);
  return order;
}

/// Position of `label` in the top_k_beams ordering (0 = most probable).
/// `label` is in top_k_beams(probs, k) iff rank < k.
template <typename Derived>
int beam_rank(const Eigen::MatrixBase<Derived>& probs, int label) {
  const double p = probs(label);
  int rank = 0;
  for (Eigen::Index m = 0; m < probs.size(); ++m)
    if (probs(m) > p || (probs(m) == p && m < label)) ++rank;
  return rank;
}

inline BeamDistribution uniform_distribution(int codebook_size) {
  return BeamDistribution::Constant(codebook_size, 1.0 / codebook_size);
}

template <typename Derived>
bool is_distribution(const Eigen::MatrixBase<Derived>& probs, double tol = 1e-9) {
  return probs.size() > 0 && (probs.array() >= 0).all() &&
         (probs.array() <= 1).all() && std::abs(probs.sum() - 1.0) <= tol;
}

}  // namespace beampred
