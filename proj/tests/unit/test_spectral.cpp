#include <doctest.h>

#include <random>

#include "cesm/eval.hpp"
#include "cesm/learners.hpp"
#include "cesm/spectral.hpp"
#include "oracles.hpp"

using namespace cesm;

namespace {

AffinityMatrix two_blocks(Index a, Index b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix w = Matrix::Zero(a + b, a + b);
  for (Index i = 0; i < a + b; ++i) {
    for (Index j = i + 1; j < a + b; ++j) {
      if ((i < a) == (j < a)) w(i, j) = w(j, i) = u(rng);
    }
  }
  return AffinityMatrix(w);
}

}  // namespace

TEST_CASE("spectral_cluster") {
  std::mt19937_64 rng(31);
  SpectralConfig cfg;

  SUBCASE("disconnected blocks are separated") {
    const Labeling l = spectral_cluster(two_blocks(7, 5, rng), cfg);
    for (Index i = 1; i < 7; ++i) CHECK(l.labels[i] == l.labels[0]);
    for (Index i = 8; i < 12; ++i) CHECK(l.labels[i] == l.labels[7]);
    CHECK(l.labels[0] != l.labels[7]);
  }

  SUBCASE("n = 1 gives one cluster") {
    cfg.n = 1;
    const Labeling l = spectral_cluster(two_blocks(4, 4, rng), cfg);
    for (int v : l.labels) CHECK(v == 0);
  }

  SUBCASE("noiseless subspace-preserving affinity clusters perfectly") {
    const auto sample = oracle::independent_subspaces(12, 3, 3, 30, rng);
    const RepresentationMatrix c = learn_omp(sample.data, sample.data, 3);
    cfg.n = 3;
    const Labeling l = spectral_cluster(build_affinity(c), cfg);
    CHECK(clustering_error(l, Labeling::from_labels(sample.labels)) == 0.0);
  }

  SUBCASE("invariant to point order up to label permutation") {
    const AffinityMatrix a = two_blocks(6, 6, rng);
    std::vector<Index> perm(12);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix w(12, 12);
    for (Index i = 0; i < 12; ++i)
      for (Index j = 0; j < 12; ++j) w(i, j) = a(perm[i], perm[j]);
    const Labeling base = spectral_cluster(a, cfg);
    const Labeling shuffled = spectral_cluster(AffinityMatrix(w), cfg);
    std::vector<int> back(12);
    for (Index i = 0; i < 12; ++i) back[perm[i]] = shuffled.labels[i];
    CHECK(clustering_error(Labeling::from_labels(back), base) == 0.0);
  }
}

TEST_CASE("normalized Laplacian spectrum lies in [0, 2]") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix w = Matrix::Zero(15, 15);
    for (Index i = 0; i < 15; ++i)
      for (Index j = i + 1; j < 15; ++j)
        if (u(rng) < 0.3) w(i, j) = w(j, i) = u(rng);
    const SpectralEmbedding e = spectral_embedding(AffinityMatrix(w), 3);
    CHECK(e.eigenvalues.minCoeff() >= -1e-8);
    CHECK(e.eigenvalues.maxCoeff() <= 2.0 + 1e-8);
    for (Index i = 0; i < 15; ++i) {
      if (w.row(i).sum() == 0.0) CHECK(e.rows.row(i).isZero(0.0));
    }
  }
}

TEST_CASE("kmeans") {
  std::mt19937_64 rng(33);
  SpectralConfig cfg;

  SUBCASE("one cluster per point") {
    const Matrix pts = oracle::random_matrix(8, 2, rng);
    const KMeansResult r = kmeans(pts, 8, cfg);
    CHECK(r.inertia == doctest::Approx(0.0));
    std::vector<int> sorted = r.labeling.labels;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  SUBCASE("well separated blobs") {
    Matrix pts = 0.1 * oracle::random_matrix(40, 2, rng);
    pts.bottomRows(20).col(0).array() += 10.0;
    const KMeansResult r = kmeans(pts, 2, cfg);
    for (Index i = 1; i < 20; ++i) CHECK(r.labeling.labels[i] == r.labeling.labels[0]);
    for (Index i = 21; i < 40; ++i) CHECK(r.labeling.labels[i] == r.labeling.labels[20]);
    CHECK(r.labeling.labels[0] != r.labeling.labels[20]);
  }

  SUBCASE("duplicates share a label") {
    Matrix pts = oracle::random_matrix(12, 3, rng);
    pts.row(5) = pts.row(2);
    pts.row(9) = pts.row(2);
    const KMeansResult r = kmeans(pts, 4, cfg);
    CHECK(r.labeling.labels[5] == r.labeling.labels[2]);
    CHECK(r.labeling.labels[9] == r.labeling.labels[2]);
  }

  SUBCASE("inertia never increases across Lloyd iterations") {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix pts = oracle::random_matrix(60, 4, rng);
      const KMeansResult r = kmeans(pts, 5, cfg);
      for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
        CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-12);
      }
    }
  }

  SUBCASE("same seed, same answer") {
    const Matrix pts = oracle::random_matrix(50, 3, rng);
    CHECK(kmeans(pts, 4, cfg).labeling.labels == kmeans(pts, 4, cfg).labeling.labels);
  }
}

TEST_CASE("SpectralConfig validation") {
  SpectralConfig cfg;
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SpectralConfig{};
  cfg.kmeans_restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
