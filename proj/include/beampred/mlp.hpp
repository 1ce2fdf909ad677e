#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "beampred/preprocess.hpp"

namespace beampred {

/// Fully connected ReLU network. weights[l] maps layer l (dims[l] wide) onto
/// layer l+1; the last layer is linear and produces logits.
template <typename Scalar>
struct Mlp {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  std::size_t layer_count() const { return weights.size(); }
  int input_size() const { return static_cast<int>(weights.front().cols()); }
  int output_size() const { return static_cast<int>(weights.back().rows()); }

  std::vector<int> dims() const {
    std::vector<int> d{input_size()};
    for (const auto& w : weights) d.push_back(static_cast<int>(w.rows()));
    return d;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
      n += weights[l].size() + biases[l].size();
    return n;
  }

  static Mlp zeros(std::span<const int> dims) {
    if (dims.size() < 2) fail(ErrorKind::InvalidConfig, "an MLP needs at least two layers");
    Mlp m;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      if (dims[l] < 1 || dims[l + 1] < 1)
        fail(ErrorKind::InvalidConfig, "layer widths must be positive");
      m.weights.push_back(Matrix::Zero(dims[l + 1], dims[l]));
      m.biases.push_back(Vector::Zero(dims[l + 1]));
    }
    return m;
  }

  Mlp zeros_like() const {
    const auto d = dims();
    return zeros(d);
  }

  bool same_shape(const Mlp& other) const { return dims() == other.dims(); }
};

/// Uniform weights with fan-in bounds (sqrt(6/fan_in) ahead of a ReLU,
/// 1/sqrt(fan_in) on the output layer) and zero biases.
template <typename Scalar>
Mlp<Scalar> init_mlp(std::span<const int> dims, std::uint64_t seed) {
  Mlp<Scalar> m = Mlp<Scalar>::zeros(dims);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    const double fan_in = dims[l];
    const bool output = l + 1 == m.layer_count();
    const double bound = output ? 1.0 / std::sqrt(fan_in) : std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> u(-bound, bound);
    auto& w = m.weights[l];
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = static_cast<Scalar>(u(rng));
  }
  return m;
}

/// Logits for a batch of inputs, one column per sample.
template <typename Scalar, typename Derived>
typename Mlp<Scalar>::Matrix forward(const Mlp<Scalar>& model,
                                     const Eigen::MatrixBase<Derived>& inputs) {
  if (inputs.rows() != model.input_size())
    fail(ErrorKind::Internal, "input has " + std::to_string(inputs.rows()) +
                                  " rows, network expects " +
                                  std::to_string(model.input_size()));
  typename Mlp<Scalar>::Matrix a = inputs.template cast<Scalar>();
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    typename Mlp<Scalar>::Matrix z = model.weights[l] * a;
    z.colwise() += model.biases[l];
    if (l + 1 < model.layer_count()) z = z.cwiseMax(Scalar(0));
    a = std::move(z);
  }
  return a;
}

template <typename Scalar>
typename Mlp<Scalar>::Vector forward(const Mlp<Scalar>& model,
                                     const NormalizedPosition& pos) {
  return forward(model, Eigen::Vector2d(pos.x, pos.y)).col(0);
}

/// Column-wise softmax, shifted by the column max for stability.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> softmax(
    const Eigen::MatrixBase<Derived>& logits) {
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> p =
      (logits.rowwise() - logits.colwise().maxCoeff()).array().exp().matrix();
  p.array().rowwise() /= p.colwise().sum().array();
  return p;
}

template <typename Scalar>
struct LossAndGrad {
  Scalar loss = 0;
  Mlp<Scalar> grad;
};

/// Mean cross-entropy over the batch and its exact gradient by backprop.
template <typename Scalar, typename Derived>
LossAndGrad<Scalar> loss_and_grad(const Mlp<Scalar>& model,
                                  const Eigen::MatrixBase<Derived>& inputs,
                                  std::span<const int> labels) {
  using Matrix = typename Mlp<Scalar>::Matrix;
  const Eigen::Index batch = inputs.cols();
  if (batch == 0 || static_cast<std::size_t>(batch) != labels.size())
    fail(ErrorKind::InvalidInput, "batch is empty or labels do not match inputs");
  const int m = model.output_size();
  for (int y : labels)
    if (y < 0 || y >= m)
      fail(ErrorKind::InvalidInput, "label " + std::to_string(y) + " outside [0, " +
                                        std::to_string(m) + ")");

  const std::size_t n_layers = model.layer_count();
  // acts[l] is the input of layer l; acts[n_layers] holds the logits.
  std::vector<Matrix> acts;
  acts.reserve(n_layers + 1);
  acts.push_back(inputs.template cast<Scalar>());
  for (std::size_t l = 0; l < n_layers; ++l) {
    Matrix z = model.weights[l] * acts[l];
    z.colwise() += model.biases[l];
    if (l + 1 < n_layers) z = z.cwiseMax(Scalar(0));
    acts.push_back(std::move(z));
  }

  const Matrix& logits = acts.back();
  const auto col_max = logits.colwise().maxCoeff().eval();
  Matrix delta = (logits.rowwise() - col_max).array().exp().matrix();
  const auto col_sum = delta.colwise().sum().eval();

  LossAndGrad<Scalar> out;
  for (Eigen::Index j = 0; j < batch; ++j) {
    const int y = labels[j];
    out.loss -= logits(y, j) - col_max(j) - std::log(col_sum(j));
  }
  out.loss /= static_cast<Scalar>(batch);

  // d(loss)/d(logits) = (softmax - onehot) / batch
  delta.array().rowwise() /= col_sum.array();
  for (Eigen::Index j = 0; j < batch; ++j) delta(labels[j], j) -= Scalar(1);
  delta /= static_cast<Scalar>(batch);

  out.grad = model.zeros_like();
  for (std::size_t l = n_layers; l-- > 0;) {
    out.grad.weights[l].noalias() = delta * acts[l].transpose();
    out.grad.biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    Matrix back = model.weights[l].transpose() * delta;
    // acts[l] is a ReLU output, so it is positive exactly where the unit was active.
    delta = back.cwiseProduct((acts[l].array() > Scalar(0)).matrix().template cast<Scalar>());
  }
  return out;
}

template <typename Scalar>
struct AdamState {
  Mlp<Scalar> first_moment;
  Mlp<Scalar> second_moment;
  std::int64_t step = 0;
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);

  static AdamState for_model(const Mlp<Scalar>& model) {
    return {model.zeros_like(), model.zeros_like()};
  }
};

/// One bias-corrected Adam update of every parameter.
template <typename Scalar>
void adam_step(Mlp<Scalar>& model, AdamState<Scalar>& state,
               const Mlp<Scalar>& grad, Scalar lr) {
  if (!model.same_shape(grad) || !model.same_shape(state.first_moment))
    fail(ErrorKind::Internal, "Adam state, gradient and model shapes differ");
  ++state.step;
  const Scalar c1 = Scalar(1) - std::pow(state.beta1, static_cast<Scalar>(state.step));
  const Scalar c2 = Scalar(1) - std::pow(state.beta2, static_cast<Scalar>(state.step));
  const auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = state.beta1 * m + (Scalar(1) - state.beta1) * g;
    v = state.beta2 * v + (Scalar(1) - state.beta2) * g.cwiseAbs2();
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.epsilon);
  };
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    update(model.weights[l], state.first_moment.weights[l], state.second_moment.weights[l],
           grad.weights[l]);
    update(model.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
           grad.biases[l]);
  }
}

struct TrainConfig {
  int batch_size = 32;
  double lr = 1e-2;
  std::vector<int> decay_epochs{20, 40};
  double decay_factor = 0.2;
  int epochs = 60;
  std::uint64_t seed = 0;
  int input_bins = 200;
  std::vector<int> hidden{256, 256, 256};
};

void validate(const TrainConfig& config);

/// Multistep schedule: lr scaled by decay_factor once per milestone passed.
double lr_at(const TrainConfig& config, int epoch);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_top1 = 0.0;
};

struct TrainResult {
  Mlp<double> model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Full training run. Positions are expected normalized and quantized.
/// Returns the weights of the epoch with the best validation top-1 accuracy
/// (earliest wins ties).
TrainResult train(const PreparedSet& train_set, const PreparedSet& val_set,
                  const TrainConfig& config);

/// Softmax probabilities, one row per row of `positions`.
Eigen::MatrixXd nn_predict(const Mlp<double>& model,
                           const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& positions);

BeamDistribution nn_predict(const Mlp<double>& model, const NormalizedPosition& pos);

}  // namespace beampred
