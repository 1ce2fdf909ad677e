#include <doctest.h>

#include <random>

#include "beampred/knn.hpp"
#include "oracles.hpp"

using namespace beampred;

namespace {

PreparedSet make_set(const std::vector<oracle::Point>& pts, int m) {
  PreparedSet s;
  s.codebook_size = m;
  s.positions.resize(static_cast<Eigen::Index>(pts.size()), 2);
  s.labels.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.positions(i, 0) = pts[i].x;
    s.positions(i, 1) = pts[i].y;
    s.labels(i) = pts[i].label;
    s.sample_ids.push_back(pts[i].id);
  }
  return s;
}

}  // namespace

TEST_CASE("knn_predict on hand-checked points") {
  const auto set = make_set({{0.1, 0.1, 3, 0}, {0.9, 0.9, 7, 1}}, 8);
  CHECK(knn_predict(knn_fit(set, 1), {0.2, 0.2}) == Eigen::VectorXd::Unit(8, 3));
  CHECK(knn_predict(knn_fit(set, 1), {0.9, 0.9}) == Eigen::VectorXd::Unit(8, 7));

  const auto both = knn_predict(knn_fit(set, 2), {0.0, 0.3});
  CHECK(both(3) == 0.5);
  CHECK(both(7) == 0.5);
}

TEST_CASE("distance ties go to the lower sample id") {
  const auto set = make_set({{0.4, 0.5, 2, 9}, {0.6, 0.5, 1, 4}}, 3);
  CHECK(knn_predict(knn_fit(set, 1), {0.5, 0.5}) == Eigen::Vector3d(0, 1, 0));
}

TEST_CASE("all neighbors give the global histogram") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> label(0, 4);
  std::vector<oracle::Point> pts;
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 30; ++i) {
    pts.push_back({u(rng), u(rng), label(rng), i});
    hist(pts.back().label) += 1.0 / 30.0;
  }
  const auto model = knn_fit(make_set(pts, 5), 30);
  for (int q = 0; q < 10; ++q)
    CHECK((knn_predict(model, {u(rng), u(rng)}) - hist).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("knn_fit validates the neighbor count") {
  const auto set = make_set({{0.1, 0.1, 0, 0}, {0.2, 0.2, 1, 1}}, 2);
  CHECK_THROWS_AS(knn_fit(set, 0), Error);
  CHECK_THROWS_AS(knn_fit(set, 3), Error);
  CHECK_THROWS_AS(knn_fit(make_set({}, 2), 1), Error);
}

TEST_CASE("knn matches the full-sort reference") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> grid(0, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 7;
    const int k = 1 + trial;
    std::uniform_int_distribution<int> label(0, m - 1);
    std::vector<oracle::Point> pts;
    for (int i = 0; i < k; ++i) {
      // Every other trial snaps to a coarse lattice to create exact distance ties.
      const bool lattice = trial % 2 == 1;
      const double x = lattice ? grid(rng) / 4.0 : u(rng);
      const double y = lattice ? grid(rng) / 4.0 : u(rng);
      pts.push_back({x, y, label(rng), 1000 - 7 * i});
    }
    const auto set = make_set(pts, m);
    for (int n = 1; n <= k; n += 1 + k / 5) {
      const auto model = knn_fit(set, n);
      for (int q = 0; q < 10; ++q) {
        const double x = trial % 2 ? grid(rng) / 4.0 : u(rng);
        const double y = trial % 2 ? grid(rng) / 4.0 : u(rng);
        const auto expected = oracle::knn(pts, n, m, x, y);
        const auto got = knn_predict(model, {x, y});
        for (int b = 0; b < m; ++b) CHECK(got(b) == expected[b]);
        CHECK(got.sum() == doctest::Approx(1.0));
        for (int b = 0; b < m; ++b) {
          const double scaled = got(b) * n;
          CHECK(scaled == doctest::Approx(std::round(scaled)));
        }
      }
    }
  }
}

TEST_CASE("knn_tune picks the best neighbor count") {
  // Separable noiseless clusters: every candidate is perfect, so 1 wins the tie.
  std::vector<oracle::Point> train, val;
  for (int i = 0; i < 20; ++i) {
    train.push_back({0.05 * (i % 5), 0.1, 0, i});
    train.push_back({0.8 + 0.04 * (i % 5), 0.9, 1, 100 + i});
  }
  val.push_back({0.1, 0.12, 0, 500});
  val.push_back({0.85, 0.88, 1, 501});
  const auto tr = make_set(train, 2);
  const auto va = make_set(val, 2);
  const std::vector<int> candidates{7, 3, 1, 15};
  for (double s : knn_validation_scores(tr, va, candidates)) CHECK(s == 1.0);
  CHECK(knn_tune(tr, va, candidates) == 1);
  CHECK(knn_tune(tr, va, std::vector<int>{5}) == 5);
  CHECK_THROWS_AS(knn_tune(tr, va, std::vector<int>{0}), Error);
  CHECK_THROWS_AS(knn_tune(tr, va, std::vector<int>{41}), Error);

  // A mislabeled point near the query punishes N = 1.
  train.push_back({0.84, 0.88, 0, 999});
  const auto noisy = make_set(train, 2);
  CHECK(knn_tune(noisy, va, std::vector<int>{1, 5}) == 5);
}
