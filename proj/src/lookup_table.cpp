#include "beampred/lookup_table.hpp"

#include <algorithm>
#include <cmath>

namespace beampred {

namespace {

int grid_index(double c, int dim) {
  return std::clamp(static_cast<int>(std::floor(c * dim)), 0, dim - 1);
}

}  // namespace

int grid_dim_of(int n_cells) {
  if (n_cells < 1) fail(ErrorKind::InvalidConfig, "lookup table needs n_cells >= 1");
  int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_cells))));
  if (dim * dim != n_cells)
    fail(ErrorKind::InvalidConfig,
         "n_cells = " + std::to_string(n_cells) + " is not a perfect square");
  return dim;
}

GridCell cell_of(const NormalizedPosition& pos, int n_cells) {
  const int dim = grid_dim_of(n_cells);
  return {grid_index(pos.x, dim), grid_index(pos.y, dim)};
}

LookupTable lt_fit(const PreparedSet& train, int n_cells) {
  if (train.size() == 0)
    fail(ErrorKind::InsufficientData, "lookup table needs training samples");
  LookupTable table;
  table.n_cells = n_cells;
  table.grid_dim = grid_dim_of(n_cells);
  table.codebook_size = train.codebook_size;
  table.default_dist = uniform_distribution(train.codebook_size);

  std::map<GridCell, Eigen::VectorXi> counts;
  for (Eigen::Index k = 0; k < train.size(); ++k) {
    auto [it, fresh] = counts.try_emplace(cell_of(train.position(k), n_cells));
    if (fresh) it->second = Eigen::VectorXi::Zero(train.codebook_size);
    ++it->second(train.labels(k));
  }
  for (const auto& [cell, c] : counts)
    table.cells.emplace(cell, c.cast<double>() / static_cast<double>(c.sum()));
  return table;
}

const BeamDistribution& lt_predict(const LookupTable& table,
                                   const NormalizedPosition& pos) {
  const GridCell cell{grid_index(pos.x, table.grid_dim), grid_index(pos.y, table.grid_dim)};
  auto it = table.cells.find(cell);
  return it != table.cells.end() ? it->second : table.default_dist;
}

std::vector<double> lt_validation_scores(const PreparedSet& train, const PreparedSet& val,
                                         std::span<const int> candidates) {
  if (val.size() == 0) fail(ErrorKind::InsufficientData, "validation set is empty");
  std::vector<double> scores;
  for (int n : candidates) {
    const LookupTable table = lt_fit(train, n);
    Eigen::Index hits = 0;
    for (Eigen::Index k = 0; k < val.size(); ++k)
      hits += beam_rank(lt_predict(table, val.position(k)), val.labels(k)) == 0;
    scores.push_back(static_cast<double>(hits) / static_cast<double>(val.size()));
  }
  return scores;
}

int lt_tune(const PreparedSet& train, const PreparedSet& val,
            std::span<const int> candidates) {
  if (candidates.empty()) fail(ErrorKind::InvalidConfig, "no grid size candidates");
  const auto scores = lt_validation_scores(train, val, candidates);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (scores[i] > scores[best] || (scores[i] == scores[best] && candidates[i] < candidates[best]))
      best = i;
  return candidates[best];
}

}  // namespace beampred
