#include "beampred/mlp.hpp"

#include <numeric>

namespace beampred {

void validate(const TrainConfig& config) {
  if (config.batch_size < 1 || config.epochs < 1 || !(config.lr > 0) ||
      !(config.decay_factor > 0) || config.input_bins < 1)
    fail(ErrorKind::InvalidConfig, "training hyperparameters must be positive");
  for (int e : config.decay_epochs)
    if (e < 1 || e >= config.epochs)
      fail(ErrorKind::InvalidConfig, "decay epoch " + std::to_string(e) +
                                         " outside [1, " + std::to_string(config.epochs) + ")");
  for (int h : config.hidden)
    if (h < 1) fail(ErrorKind::InvalidConfig, "hidden layer widths must be positive");
}

double lr_at(const TrainConfig& config, int epoch) {
  double lr = config.lr;
  for (int milestone : config.decay_epochs)
    if (epoch >= milestone) lr *= config.decay_factor;
  return lr;
}

namespace {

double top1_accuracy(const Mlp<double>& model, const PreparedSet& set) {
  const Eigen::MatrixXd logits = forward(model, set.positions.transpose());
  Eigen::Index hits = 0;
  for (Eigen::Index k = 0; k < set.size(); ++k)
    hits += beam_rank(logits.col(k), set.labels(k)) == 0;
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

}  // namespace

TrainResult train(const PreparedSet& train_set, const PreparedSet& val_set,
                  const TrainConfig& config) {
  validate(config);
  if (train_set.size() == 0 || val_set.size() == 0)
    fail(ErrorKind::InsufficientData, "training and validation sets must be non-empty");
  if (train_set.codebook_size != val_set.codebook_size)
    fail(ErrorKind::InvalidInput, "training and validation codebook sizes differ");

  std::vector<int> dims{2};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(train_set.codebook_size);

  // Separate streams for initialization and batch order.
  std::seed_seq seeds{config.seed, std::uint64_t{0x5eed}};
  std::array<std::uint64_t, 2> stream{};
  seeds.generate(stream.begin(), stream.end());

  TrainResult result;
  Mlp<double> model = init_mlp<double>(dims, stream[0]);
  AdamState<double> adam = AdamState<double>::for_model(model);
  std::mt19937_64 rng(stream[1]);

  const Eigen::Index k = train_set.size();
  std::vector<Eigen::Index> order(k);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::Matrix2Xd batch_inputs;
  std::vector<int> batch_labels;

  double best_acc = -1.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at(config, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < k; start += config.batch_size) {
      const Eigen::Index n = std::min<Eigen::Index>(config.batch_size, k - start);
      batch_inputs.resize(2, n);
      batch_labels.resize(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        batch_inputs.col(j) = train_set.positions.row(order[start + j]).transpose();
        batch_labels[j] = train_set.labels(order[start + j]);
      }
      auto step = loss_and_grad(model, batch_inputs, batch_labels);
      loss_sum += step.loss * static_cast<double>(n);
      adam_step(model, adam, step.grad, lr);
    }

    const double acc = top1_accuracy(model, val_set);
    result.history.push_back({epoch, lr, loss_sum / static_cast<double>(k), acc});
    if (acc > best_acc) {
      best_acc = acc;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

Eigen::MatrixXd nn_predict(
    const Mlp<double>& model,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& positions) {
  return softmax(forward(model, positions.transpose())).transpose();
}

BeamDistribution nn_predict(const Mlp<double>& model, const NormalizedPosition& pos) {
  return softmax(forward(model, pos));
}

}  // namespace beampred
