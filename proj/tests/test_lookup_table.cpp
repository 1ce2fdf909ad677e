#include <doctest.h>

#include <random>

#include "beampred/lookup_table.hpp"
#include "oracles.hpp"

using namespace beampred;

namespace {

PreparedSet make_set(const std::vector<std::pair<NormalizedPosition, int>>& pts, int m) {
  PreparedSet s;
  s.codebook_size = m;
  s.positions.resize(static_cast<Eigen::Index>(pts.size()), 2);
  s.labels.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.positions(i, 0) = pts[i].first.x;
    s.positions(i, 1) = pts[i].first.y;
    s.labels(i) = pts[i].second;
    s.sample_ids.push_back(static_cast<std::int64_t>(i));
  }
  return s;
}

}  // namespace

TEST_CASE("cell_of follows the square grid") {
  CHECK(cell_of({0.5, 0.5}, 16) == GridCell{2, 2});
  CHECK(cell_of({0.0, 0.0}, 16) == GridCell{0, 0});
  CHECK(cell_of({1.0, 1.0}, 16) == GridCell{3, 3});
  CHECK(cell_of({0.26, 0.74}, 16) == GridCell{1, 2});
  CHECK(cell_of({0.9, 0.1}, 1) == GridCell{0, 0});
  CHECK_THROWS_AS(cell_of({0.5, 0.5}, 10), Error);
  CHECK_THROWS_AS(cell_of({0.5, 0.5}, 0), Error);
}

TEST_CASE("lt_fit counts labels per cell") {
  const auto train = make_set({{{0.1, 0.1}, 5}, {{0.12, 0.1}, 5}, {{0.1, 0.13}, 7}}, 8);
  const auto table = lt_fit(train, 16);
  const auto& p = lt_predict(table, {0.11, 0.11});
  CHECK(p(5) == doctest::Approx(2.0 / 3.0));
  CHECK(p(7) == doctest::Approx(1.0 / 3.0));
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p(0) == 0.0);

  // Empty cell answers uniformly.
  const auto& empty = lt_predict(table, {0.9, 0.9});
  CHECK((empty.array() == 1.0 / 8.0).all());
}

TEST_CASE("lt_predict is piecewise constant and one-hot for pure cells") {
  const auto train = make_set({{{0.6, 0.6}, 3}, {{0.65, 0.6}, 3}}, 4);
  const auto table = lt_fit(train, 4);
  CHECK(lt_predict(table, {0.9, 0.55}) == Eigen::Vector4d(0, 0, 0, 1));
  CHECK(lt_predict(table, {0.51, 0.99}) == lt_predict(table, {0.7, 0.8}));
  CHECK_THROWS_AS(lt_fit(make_set({}, 4), 4), Error);
}

TEST_CASE("single-cell table returns the global histogram") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> label(0, 5);
  std::vector<std::pair<NormalizedPosition, int>> pts;
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(6);
  for (int i = 0; i < 40; ++i) {
    const int l = label(rng);
    pts.push_back({{u(rng), u(rng)}, l});
    hist(l) += 1;
  }
  hist /= 40.0;
  const auto table = lt_fit(make_set(pts, 6), 1);
  for (int q = 0; q < 20; ++q)
    CHECK((lt_predict(table, {u(rng), u(rng)}) - hist).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("lt matches the dense reference") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 7;
    const int k = 1 + trial;
    std::uniform_int_distribution<int> label(0, m - 1);
    std::vector<std::pair<NormalizedPosition, int>> pts;
    std::vector<oracle::Point> ref;
    for (int i = 0; i < k; ++i) {
      pts.push_back({{u(rng), u(rng)}, label(rng)});
      ref.push_back({pts.back().first.x, pts.back().first.y, pts.back().second, i});
    }
    const int n_cells = (1 + trial % 6) * (1 + trial % 6);
    const auto table = lt_fit(make_set(pts, m), n_cells);
    for (int q = 0; q < 25; ++q) {
      const double x = u(rng), y = u(rng);
      const auto expected = oracle::lookup_table(ref, n_cells, m, x, y);
      const auto& got = lt_predict(table, {x, y});
      for (int b = 0; b < m; ++b) CHECK(got(b) == expected[b]);
    }
  }
}

TEST_CASE("lt_tune prefers the grid that covers validation cells") {
  // Ten samples in two clusters; the 100x100 grid leaves validation cells empty.
  std::vector<std::pair<NormalizedPosition, int>> train_pts, val_pts;
  for (int i = 0; i < 4; ++i) {
    train_pts.push_back({{0.10 + 0.01 * i, 0.10}, 1});
    train_pts.push_back({{0.80 + 0.01 * i, 0.80}, 2});
  }
  val_pts.push_back({{0.2, 0.2}, 1});
  val_pts.push_back({{0.9, 0.9}, 2});
  const auto train = make_set(train_pts, 4);
  const auto val = make_set(val_pts, 4);

  const std::vector<int> candidates{4, 10000};
  const auto scores = lt_validation_scores(train, val, candidates);
  CHECK(scores[0] == 1.0);
  CHECK(scores[1] == 0.0);
  CHECK(lt_tune(train, val, candidates) == 4);

  const std::vector<int> one{16};
  CHECK(lt_tune(train, val, one) == 16);
  const std::vector<int> tied{16, 4};  // both perfect -> smaller grid
  CHECK(lt_tune(train, val, tied) == 4);
  CHECK_THROWS_AS(lt_tune(train, val, std::vector<int>{}), Error);
}
