#include "beampred/knn.hpp"

#include <algorithm>
#include <numeric>

namespace beampred {

KnnModel knn_fit(const PreparedSet& train, int n_neighbors) {
  if (train.size() == 0)
    fail(ErrorKind::InsufficientData, "KNN needs training samples");
  if (n_neighbors < 1 || n_neighbors > train.size())
    fail(ErrorKind::InvalidConfig, "n_neighbors = " + std::to_string(n_neighbors) +
                                       " outside [1, " + std::to_string(train.size()) + "]");
  return {train.positions, train.labels, train.sample_ids, n_neighbors,
          train.codebook_size};
}

std::vector<Eigen::Index> nearest_neighbors(const KnnModel& model,
                                            const NormalizedPosition& pos,
                                            int n) {
  if (model.size() == 0) fail(ErrorKind::InsufficientData, "KNN model is empty");
  const Eigen::RowVector2d query(pos.x, pos.y);
  // Squared distances order identically to Euclidean ones.
  const Eigen::VectorXd d2 = (model.points.rowwise() - query).rowwise().squaredNorm();

  std::vector<Eigen::Index> idx(model.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  const auto closer = [&](Eigen::Index a, Eigen::Index b) {
    if (d2(a) != d2(b)) return d2(a) < d2(b);
    return model.sample_ids[a] < model.sample_ids[b];
  };
  const auto take = std::min<Eigen::Index>(n, model.size());
  std::partial_sort(idx.begin(), idx.begin() + take, idx.end(), closer);
  idx.resize(take);
  return idx;
}

BeamDistribution knn_predict(const KnnModel& model, const NormalizedPosition& pos) {
  BeamDistribution p = BeamDistribution::Zero(model.codebook_size);
  for (Eigen::Index i : nearest_neighbors(model, pos, model.n_neighbors))
    p(model.labels(i)) += 1.0;
  return p / static_cast<double>(model.n_neighbors);
}

std::vector<double> knn_validation_scores(const PreparedSet& train, const PreparedSet& val,
                                          std::span<const int> candidates) {
  if (val.size() == 0) fail(ErrorKind::InsufficientData, "validation set is empty");
  for (int n : candidates)
    if (n < 1 || n > train.size())
      fail(ErrorKind::InvalidConfig, "n_neighbors candidate " + std::to_string(n) +
                                         " outside [1, " + std::to_string(train.size()) + "]");
  if (candidates.empty()) return {};

  const int widest = *std::max_element(candidates.begin(), candidates.end());
  const KnnModel model = knn_fit(train, widest);

  // One neighbor ranking per validation point serves every candidate.
  std::vector<std::vector<Eigen::Index>> ranked(val.size());
  for (Eigen::Index k = 0; k < val.size(); ++k)
    ranked[k] = nearest_neighbors(model, val.position(k), widest);

  std::vector<double> scores;
  Eigen::VectorXi votes(train.codebook_size);
  for (int n : candidates) {
    Eigen::Index hits = 0;
    for (Eigen::Index k = 0; k < val.size(); ++k) {
      votes.setZero();
      for (int j = 0; j < n; ++j) ++votes(model.labels(ranked[k][j]));
      hits += beam_rank(votes, val.labels(k)) == 0;
    }
    scores.push_back(static_cast<double>(hits) / static_cast<double>(val.size()));
  }
  return scores;
}

int knn_tune(const PreparedSet& train, const PreparedSet& val,
             std::span<const int> candidates) {
  if (candidates.empty()) fail(ErrorKind::InvalidConfig, "no neighbor count candidates");
  const auto scores = knn_validation_scores(train, val, candidates);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (scores[i] > scores[best] || (scores[i] == scores[best] && candidates[i] < candidates[best]))
      best = i;
  return candidates[best];
}

}  // namespace beampred
