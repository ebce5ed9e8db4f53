#include <doctest.h>

#include <random>

#include "cesm/eval.hpp"
#include "oracles.hpp"

using namespace cesm;

TEST_CASE("clustering_error") {
  const Labeling truth = Labeling::from_labels({0, 0, 0, 1, 1, 1, 2, 2});
  CHECK(clustering_error(truth, truth) == 0.0);
  CHECK(clustering_error(Labeling::from_labels({2, 2, 2, 0, 0, 0, 1, 1}), truth) == 0.0);

  const Labeling t10 = Labeling::from_labels({0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  const Labeling p10 = Labeling::from_labels({0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(clustering_error(p10, t10) == doctest::Approx(10.0));

  SUBCASE("agrees with brute force and handles unequal cluster counts") {
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> k(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
      const int kp = k(rng);
      const int kt = k(rng);
      std::uniform_int_distribution<int> lp(0, kp - 1);
      std::uniform_int_distribution<int> lt(0, kt - 1);
      std::vector<int> pred(25);
      std::vector<int> tr(25);
      for (int i = 0; i < 25; ++i) {
        pred[static_cast<std::size_t>(i)] = lp(rng);
        tr[static_cast<std::size_t>(i)] = lt(rng);
      }
      const double e = clustering_error(Labeling::from_labels(pred), Labeling::from_labels(tr));
      CHECK(e == doctest::Approx(oracle::brute_force_error_pct(pred, tr)).epsilon(1e-12));
      CHECK(e >= 0.0);
      CHECK(e <= 100.0);
    }
  }
}

TEST_CASE("rand_index") {
  const Labeling a = Labeling::from_labels({0, 1, 1, 2, 0});
  CHECK(rand_index(a, a) == 100.0);
  CHECK(rand_index(Labeling::from_labels({0, 0, 0}), Labeling::from_labels({0, 1, 2})) == 0.0);
  CHECK(rand_index(Labeling::from_labels({0, 1, 0, 1}), Labeling::from_labels({0, 0, 1, 1})) ==
        doctest::Approx(100.0 / 3.0));

  std::mt19937_64 rng(72);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> p(20);
    std::vector<int> t(20);
    for (int i = 0; i < 20; ++i) {
      p[static_cast<std::size_t>(i)] = lab(rng);
      t[static_cast<std::size_t>(i)] = lab(rng);
    }
    const double ri = rand_index(Labeling::from_labels(p), Labeling::from_labels(t));
    CHECK(ri == doctest::Approx(oracle::brute_force_rand_index(p, t)).epsilon(1e-12));
    std::vector<int> shifted = p;
    for (int& v : shifted) v = (v + 1) % 4;
    CHECK(rand_index(Labeling::from_labels(shifted), Labeling::from_labels(t)) == doctest::Approx(ri));
  }
  CHECK_THROWS_AS(rand_index(Labeling::from_labels({0}), Labeling::from_labels({0})), Error);
}

TEST_CASE("summaries skip early time steps and match per-row means") {
  std::vector<RunRow> rows;
  for (int t = 1; t <= 4; ++t) {
    rows.push_back({0, t, "static", 10.0 * t, 50.0, std::nullopt, 0.1});
    rows.push_back({0, t, "cesm", 5.0 * t, 60.0, 0.25 * t, 0.2});
  }
  const auto summaries = summarize(rows, 2);
  REQUIRE(summaries.size() == 2);
  for (const MethodSummary& s : summaries) {
    CHECK(s.rows == 3);
    if (s.method == "static") {
      CHECK(s.error_mean == doctest::Approx((20.0 + 30.0 + 40.0) / 3.0));
      CHECK_FALSE(s.alpha_mean);
    } else {
      CHECK(s.error_mean == doctest::Approx((10.0 + 15.0 + 20.0) / 3.0));
      REQUIRE(s.alpha_mean);
      CHECK(*s.alpha_mean == doctest::Approx(0.75));
    }
  }
  const auto by_t = mean_error_by_t(rows, "cesm", 4);
  CHECK(by_t == std::vector<double>{5.0, 10.0, 15.0, 20.0});
}
