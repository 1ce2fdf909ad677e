#pragma once

#include <span>

#include "beampred/preprocess.hpp"

namespace beampred {

struct KnnModel {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXi labels;
  std::vector<std::int64_t> sample_ids;
  int n_neighbors = 1;
  int codebook_size = 0;

  Eigen::Index size() const { return labels.size(); }
};

/// Wraps the training set; throws InvalidConfig unless 1 <= n_neighbors <= K.
KnnModel knn_fit(const PreparedSet& train, int n_neighbors);

/// Indices of the n nearest training points, nearest first. Equal distances
/// are ordered by sample id.
std::vector<Eigen::Index> nearest_neighbors(const KnnModel& model,
                                            const NormalizedPosition& pos,
                                            int n);

/// Label histogram of the nearest n_neighbors points divided by n_neighbors.
BeamDistribution knn_predict(const KnnModel& model, const NormalizedPosition& pos);

/// Top-1 validation accuracy for each candidate neighbor count.
std::vector<double> knn_validation_scores(const PreparedSet& train, const PreparedSet& val,
                                          std::span<const int> candidates);

/// Neighbor count with the best top-1 validation accuracy; ties go to the
/// smaller count.
int knn_tune(const PreparedSet& train, const PreparedSet& val,
             std::span<const int> candidates);

}  // namespace beampred
