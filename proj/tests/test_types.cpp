#include <doctest.h>

#include <random>
#include <set>

#include "beampred/types.hpp"

using namespace beampred;

TEST_CASE("best_beam picks the strongest beam") {
  CHECK(best_beam(Eigen::Vector3d(0.1, 0.9, 0.3)) == 1);
  CHECK(best_beam(Eigen::Vector3d(0.5, 0.5, 0.5)) == 0);
  for (int m = 0; m < 8; ++m) CHECK(best_beam(Eigen::VectorXd::Unit(8, m)) == m);
}

TEST_CASE("best_beam rejects empty and all-zero vectors") {
  CHECK_THROWS_AS(best_beam(Eigen::VectorXd()), Error);
  CHECK_THROWS_AS(best_beam(Eigen::VectorXd::Zero(4)), Error);
  CHECK_THROWS_AS(best_beam(Eigen::Vector2d(-1.0, 2.0)), Error);
}

TEST_CASE("best_beam is scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd p(16);
    for (auto& v : p) v = u(rng);
    const double c = 1e-3 + 1e3 * u(rng);
    CHECK(best_beam(p) == best_beam((c * p).eval()));
  }
}

TEST_CASE("top_k_beams orders by probability then index") {
  const Eigen::Vector3d p(0.1, 0.7, 0.2);
  CHECK(top_k_beams(p, 1) == std::vector<int>{1});
  CHECK(top_k_beams(p, 3) == std::vector<int>{1, 2, 0});
  CHECK(top_k_beams(uniform_distribution(4), 2) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(top_k_beams(p, 0), Error);
  CHECK_THROWS_AS(top_k_beams(p, 4), Error);
}

TEST_CASE("top_k_beams properties on random distributions") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coarse(0, 4);  // coarse values force ties
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 12;
    Eigen::VectorXd p(m);
    for (auto& v : p) v = coarse(rng) + 1.0;
    p /= p.sum();

    const auto all = top_k_beams(p, m);
    CHECK(std::set<int>(all.begin(), all.end()).size() == static_cast<std::size_t>(m));
    for (int k = 1; k < m; ++k) {
      const auto a = top_k_beams(p, k);
      const auto b = top_k_beams(p, k + 1);
      CHECK(std::equal(a.begin(), a.end(), b.begin()));  // prefix, hence subset
    }
    for (int label = 0; label < m; ++label)
      CHECK(all[beam_rank(p, label)] == label);
  }
}

TEST_CASE("scenario validation") {
  Scenario s{"s", 2, {{{10, 20}, Eigen::Vector2d(1, 2), 0}, {{10, 21}, Eigen::Vector2d(1, 2), 1}}};
  CHECK_NOTHROW(validate(s));
  s.samples[1].sample_id = 0;
  CHECK_THROWS_AS(validate(s), Error);
  s.samples[1].sample_id = 1;
  s.samples[1].position.lat = 91;
  CHECK_THROWS_AS(validate(s), Error);
  s.samples[1].position.lat = 10;
  s.samples[1].powers = Eigen::Vector3d(1, 2, 3);
  CHECK_THROWS_AS(validate(s), Error);
}
