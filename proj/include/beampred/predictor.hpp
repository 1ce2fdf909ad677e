#pragma once

#include <string>
#include <variant>
#include <vector>

#include "beampred/knn.hpp"
#include "beampred/lookup_table.hpp"
#include "beampred/metrics.hpp"
#include "beampred/mlp.hpp"

namespace beampred {

enum class PredictorKind { LookupTable, Knn, Neural };

PredictorKind parse_predictor(const std::string& name);
std::string predictor_name(PredictorKind kind);

struct NeuralModel {
  Mlp<double> network;
  TrainConfig config;
  int best_epoch = 0;
};

using PredictorModel = std::variant<LookupTable, KnnModel, NeuralModel>;

struct PredictorOptions {
  std::vector<int> lt_candidates{16, 64, 256, 1024, 4096, 10000, 40000};
  std::vector<int> knn_candidates{1, 3, 5, 7, 9, 15, 25};
  TrainConfig nn;
};

/// Validation score of one hyperparameter candidate (LT/KNN) or one epoch (NN).
struct TuningRecord {
  int candidate = 0;
  double val_top1 = 0.0;
};

/// A predictor together with the normalization it was trained under.
struct FittedPredictor {
  PredictorKind kind = PredictorKind::Neural;
  NormParams norm;
  PredictorModel model;
  std::vector<TuningRecord> tuning;  // LT / KNN
  std::vector<EpochRecord> history;  // NN
};

/// Fits normalization on `train`, then tunes (LT/KNN) or trains (NN).
FittedPredictor fit_predictor(PredictorKind kind, const Scenario& train,
                              const Scenario& val, const PredictorOptions& options);

/// One distribution row per sample of `scenario`.
DistributionMatrix predict(const FittedPredictor& predictor, const Scenario& scenario);

int codebook_size(const FittedPredictor& predictor);

}  // namespace beampred
