#include "beampred/predictor.hpp"

namespace beampred {

PredictorKind parse_predictor(const std::string& name) {
  if (name == "lt") return PredictorKind::LookupTable;
  if (name == "knn") return PredictorKind::Knn;
  if (name == "nn") return PredictorKind::Neural;
  fail(ErrorKind::InvalidConfig, "unknown predictor '" + name + "' (expected lt, knn or nn)");
}

std::string predictor_name(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::LookupTable:
      return "lt";
    case PredictorKind::Knn:
      return "knn";
    case PredictorKind::Neural:
      return "nn";
  }
  return "nn";
}

FittedPredictor fit_predictor(PredictorKind kind, const Scenario& train,
                              const Scenario& val, const PredictorOptions& options) {
  if (train.samples.empty() || val.samples.empty())
    fail(ErrorKind::InsufficientData, "training and validation sets must be non-empty");
  FittedPredictor out;
  out.kind = kind;
  out.norm = fit_norm(train.samples);

  switch (kind) {
    case PredictorKind::LookupTable: {
      const auto tr = prepare(train, out.norm);
      const auto va = prepare(val, out.norm);
      const auto scores = lt_validation_scores(tr, va, options.lt_candidates);
      for (std::size_t i = 0; i < scores.size(); ++i)
        out.tuning.push_back({options.lt_candidates[i], scores[i]});
      out.model = lt_fit(tr, lt_tune(tr, va, options.lt_candidates));
      break;
    }
    case PredictorKind::Knn: {
      const auto tr = prepare(train, out.norm);
      const auto va = prepare(val, out.norm);
      const auto scores = knn_validation_scores(tr, va, options.knn_candidates);
      for (std::size_t i = 0; i < scores.size(); ++i)
        out.tuning.push_back({options.knn_candidates[i], scores[i]});
      out.model = knn_fit(tr, knn_tune(tr, va, options.knn_candidates));
      break;
    }
    case PredictorKind::Neural: {
      const int bins = options.nn.input_bins;
      auto result = beampred::train(prepare(train, out.norm, bins), prepare(val, out.norm, bins),
                          options.nn);
      out.history = std::move(result.history);
      out.model = NeuralModel{std::move(result.model), options.nn, result.best_epoch};
      break;
    }
  }
  return out;
}

int codebook_size(const FittedPredictor& predictor) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NeuralModel>)
          return m.network.output_size();
        else
          return m.codebook_size;
      },
      predictor.model);
}

DistributionMatrix predict(const FittedPredictor& predictor, const Scenario& scenario) {
  const int m = codebook_size(predictor);
  if (scenario.codebook_size != m)
    fail(ErrorKind::InvalidInput, "model expects " + std::to_string(m) +
                                      " beams, scenario has " +
                                      std::to_string(scenario.codebook_size));
  const auto k = static_cast<Eigen::Index>(scenario.samples.size());
  DistributionMatrix dists(k, m);
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, NeuralModel>) {
          const auto set = prepare(scenario, predictor.norm, model.config.input_bins);
          dists = nn_predict(model.network, set.positions);
        } else {
          for (Eigen::Index i = 0; i < k; ++i) {
            const auto pos = apply_norm(predictor.norm, scenario.samples[i].position);
            if constexpr (std::is_same_v<T, LookupTable>)
              dists.row(i) = lt_predict(model, pos).transpose();
            else
              dists.row(i) = knn_predict(model, pos).transpose();
          }
        }
      },
      predictor.model);
  return dists;
}

}  // namespace beampred
