#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "beampred/preprocess.hpp"

namespace beampred {

struct GridCell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

/// Position database over a uniform sqrt(N) x sqrt(N) grid. Only cells that
/// received training samples are stored; every other cell answers with the
/// uniform distribution.
struct LookupTable {
  int n_cells = 1;
  int grid_dim = 1;
  int codebook_size = 0;
  std::map<GridCell, BeamDistribution> cells;
  BeamDistribution default_dist;
};

/// Exact integer square root of n_cells; throws InvalidConfig otherwise.
int grid_dim_of(int n_cells);

/// Grid cell of a normalized position. Row follows latitude, column follows
/// longitude; a coordinate of 1.0 falls into the last row/column.
GridCell cell_of(const NormalizedPosition& pos, int n_cells);

LookupTable lt_fit(const PreparedSet& train, int n_cells);

const BeamDistribution& lt_predict(const LookupTable& table,
                                   const NormalizedPosition& pos);

/// Top-1 validation accuracy of one table per candidate grid size.
std::vector<double> lt_validation_scores(const PreparedSet& train, const PreparedSet& val,
                                         std::span<const int> candidates);

/// Grid size with the best top-1 validation accuracy; ties go to the
/// smaller grid.
int lt_tune(const PreparedSet& train, const PreparedSet& val,
            std::span<const int> candidates);

}  // namespace beampred
