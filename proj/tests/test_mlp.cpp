#include <doctest.h>

#include <cmath>
#include <random>

#include "beampred/mlp.hpp"
#include "oracles.hpp"

using namespace beampred;

namespace {

Eigen::Matrix2Xd random_inputs(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::Matrix2Xd x(2, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("zero network gives zero logits and a uniform prediction") {
  const std::vector<int> dims{2, 4, 4, 3};
  const auto net = Mlp<double>::zeros(dims);
  CHECK(forward(net, NormalizedPosition{0.3, 0.7}) == Eigen::Vector3d::Zero());
  const auto p = nn_predict(net, NormalizedPosition{0.9, 0.1});
  CHECK((p.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);
}

TEST_CASE("forward on a hand-set 2-2-2 network") {
  const std::vector<int> dims{2, 2, 2};
  auto net = Mlp<double>::zeros(dims);
  net.weights[0] << 1, 0, 0, -1;  // h = relu(x, -y)
  net.biases[0] << 0.5, 0.25;
  net.weights[1] << 2, 0, 1, 3;
  net.biases[1] << -1, 0;
  // input (0.5, 0.125): z1 = (1.0, 0.125), h = (1.0, 0.125)
  // logits = (2*1 - 1, 1 + 3*0.125) = (1.0, 1.375)
  const auto logits = forward(net, NormalizedPosition{0.5, 0.125});
  CHECK(logits(0) == doctest::Approx(1.0));
  CHECK(logits(1) == doctest::Approx(1.375));
  // input (0.5, 0.5): z1 = (1.0, -0.25) -> h = (1.0, 0) -> logits (1, 1)
  const auto clipped = forward(net, NormalizedPosition{0.5, 0.5});
  CHECK(clipped(0) == doctest::Approx(1.0));
  CHECK(clipped(1) == doctest::Approx(1.0));
  CHECK(forward(net, NormalizedPosition{0.5, 0.125}) == logits);
}

TEST_CASE("forward rejects mismatched inputs") {
  const std::vector<int> dims{2, 3, 2};
  const auto net = Mlp<double>::zeros(dims);
  CHECK_THROWS_AS(forward(net, Eigen::Matrix3Xd::Zero(3, 1)), Error);
}

TEST_CASE("cross-entropy special values") {
  const std::vector<int> dims{2, 5, 7};
  const auto net = Mlp<double>::zeros(dims);
  Eigen::Matrix2Xd x(2, 3);
  x << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  const std::vector<int> labels{0, 3, 6};
  CHECK(loss_and_grad(net, x, labels).loss == doctest::Approx(std::log(7.0)));

  auto sharp = net;
  sharp.biases[1](3) = 60.0;
  const std::vector<int> threes{3, 3, 3};
  CHECK(loss_and_grad(sharp, x, threes).loss < 1e-20);

  CHECK_THROWS_AS(loss_and_grad(net, x, std::vector<int>{0, 7, 1}), Error);
  CHECK_THROWS_AS(loss_and_grad(net, x, std::vector<int>{0, 1}), Error);
}

TEST_CASE("backprop matches central finite differences") {
  std::mt19937_64 rng(99);
  const std::vector<int> dims{2, 8, 8, 8, 5};
  std::uniform_int_distribution<int> label(0, 4);
  for (int trial = 0; trial < 5; ++trial) {
    auto net = init_mlp<double>(dims, 1000 + trial);
    std::normal_distribution<double> b(0.0, 0.1);
    for (auto& bias : net.biases)
      for (auto& v : bias) v = b(rng);
    const auto x = random_inputs(4, rng);
    const std::vector<int> y{label(rng), label(rng), label(rng), label(rng)};

    const auto analytic = loss_and_grad(net, x, y);
    CHECK(analytic.loss == doctest::Approx(oracle::cross_entropy(net, x, y)).epsilon(1e-12));
    const auto numeric = oracle::numeric_gradient(net, x, y);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      for (Eigen::Index i = 0; i < net.weights[l].size(); ++i)
        CHECK(oracle::relative_error(analytic.grad.weights[l].data()[i],
                                     numeric.weights[l].data()[i]) < 1e-4);
      for (Eigen::Index i = 0; i < net.biases[l].size(); ++i)
        CHECK(oracle::relative_error(analytic.grad.biases[l].data()[i],
                                     numeric.biases[l].data()[i]) < 1e-4);
    }
  }
}

TEST_CASE("softmax is shift invariant and preserves the argmax") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 3);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd z(9);
    for (auto& v : z) v = n(rng);
    const Eigen::VectorXd p = softmax(z);
    const Eigen::VectorXd q = softmax((z.array() + n(rng) * 10).matrix());
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    CHECK((p - q).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::Index zi, pi;
    z.maxCoeff(&zi);
    p.maxCoeff(&pi);
    CHECK(zi == pi);
  }
  const std::vector<int> dims{2, 16, 16, 6};
  const auto net = init_mlp<double>(dims, 3);
  for (int t = 0; t < 20; ++t) {
    const auto p = nn_predict(net, NormalizedPosition{0.05 * t, 1.0 - 0.05 * t});
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("adam: zero gradient leaves fresh parameters alone") {
  const std::vector<int> dims{2, 3, 2};
  auto net = init_mlp<double>(dims, 8);
  const auto before = net;
  auto state = AdamState<double>::for_model(net);
  adam_step(net, state, net.zeros_like(), 0.01);
  CHECK(state.step == 1);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    CHECK(net.weights[l] == before.weights[l]);
    CHECK(net.biases[l] == before.biases[l]);
  }
}

TEST_CASE("adam: hand-computed scalar updates") {
  const std::vector<int> dims{1, 1};
  auto net = Mlp<double>::zeros(dims);
  net.weights[0](0, 0) = 1.0;
  auto state = AdamState<double>::for_model(net);
  auto grad = net.zeros_like();

  // Step 1, g = 0.5: m = 0.05, v = 0.00025, mhat = 0.5, vhat = 0.25,
  // update = 0.1 * 0.5 / (0.5 + 1e-8).
  grad.weights[0](0, 0) = 0.5;
  adam_step(net, state, grad, 0.1);
  const double w1 = 1.0 - 0.1 * 0.5 / (0.5 + 1e-8);
  CHECK(net.weights[0](0, 0) == doctest::Approx(w1).epsilon(1e-14));

  // Step 2, g = -1: m = 0.045 - 0.1 = -0.055, v = 0.00024975 + 0.001 = 0.00124975,
  // mhat = -0.055 / 0.19, vhat = 0.00124975 / 0.001999.
  grad.weights[0](0, 0) = -1.0;
  adam_step(net, state, grad, 0.1);
  const double mhat = -0.055 / (1 - 0.81);
  const double vhat = 0.00124975 / (1 - 0.998001);
  const double w2 = w1 - 0.1 * mhat / (std::sqrt(vhat) + 1e-8);
  CHECK(net.weights[0](0, 0) == doctest::Approx(w2).epsilon(1e-12));
  CHECK(state.step == 2);
}

TEST_CASE("multistep learning rate") {
  TrainConfig c;
  CHECK(lr_at(c, 0) == 1e-2);
  CHECK(lr_at(c, 19) == 1e-2);
  CHECK(lr_at(c, 20) == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(lr_at(c, 39) == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(lr_at(c, 45) == doctest::Approx(4e-4).epsilon(1e-12));
  CHECK(lr_at(c, 59) == doctest::Approx(4e-4).epsilon(1e-12));
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(validate(c));
  c.decay_epochs = {20, 60};
  CHECK_THROWS_AS(validate(c), Error);
  c = TrainConfig{};
  c.batch_size = 0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("first-batch loss starts near ln(M) for a quiet output layer") {
  std::mt19937_64 rng(12);
  const std::vector<int> dims{2, 256, 256, 256, 64};
  auto net = init_mlp<double>(dims, 12);
  net.weights.back() *= 1e-3;
  const auto x = random_inputs(32, rng);
  std::vector<int> y(32);
  std::uniform_int_distribution<int> label(0, 63);
  for (auto& v : y) v = label(rng);
  CHECK(loss_and_grad(net, x, y).loss == doctest::Approx(std::log(64.0)).epsilon(0.01));
}

namespace {

// 32 samples on distinct quantized positions, labelled by x band.
PreparedSet toy_set() {
  PreparedSet s;
  s.codebook_size = 4;
  s.positions.resize(32, 2);
  s.labels.resize(32);
  for (int i = 0; i < 32; ++i) {
    const double x = quantize_position({(i % 8) / 8.0 + 0.03, 0.0}).x;
    const double y = quantize_position({0.0, (i / 8) / 4.0 + 0.06}).y;
    s.positions(i, 0) = x;
    s.positions(i, 1) = y;
    s.labels(i) = (i % 8) / 2;
    s.sample_ids.push_back(i);
  }
  return s;
}

}  // namespace

TEST_CASE("training memorizes a tiny set and is deterministic") {
  const auto set = toy_set();
  TrainConfig c;
  c.seed = 21;
  c.batch_size = 4;  // 8 updates per epoch
  const auto a = train(set, set, c);
  CHECK(a.history.size() == 60);
  CHECK(a.history[a.best_epoch].val_top1 == 1.0);
  for (int e = 0; e < a.best_epoch; ++e) CHECK(a.history[e].val_top1 < 1.0);
  for (std::size_t e = 0; e < a.history.size(); ++e)
    CHECK(a.history[e].lr == lr_at(c, static_cast<int>(e)));

  const Eigen::MatrixXd probs = nn_predict(a.model, set.positions);
  for (Eigen::Index k = 0; k < set.size(); ++k) CHECK(beam_rank(probs.row(k).transpose(), set.labels(k)) == 0);

  const auto b = train(set, set, c);
  CHECK(b.best_epoch == a.best_epoch);
  for (std::size_t l = 0; l < a.model.layer_count(); ++l) {
    CHECK(a.model.weights[l] == b.model.weights[l]);
    CHECK(a.model.biases[l] == b.model.biases[l]);
  }
}

TEST_CASE("train rejects empty sets") {
  const auto set = toy_set();
  PreparedSet empty;
  empty.codebook_size = 4;
  CHECK_THROWS_AS(train(empty, set, TrainConfig{}), Error);
  CHECK_THROWS_AS(train(set, empty, TrainConfig{}), Error);
}
