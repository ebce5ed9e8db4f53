#include <doctest.h>

#include <random>

#include "cesm/baselines.hpp"
#include "oracles.hpp"

using namespace cesm;

namespace {

AffinityMatrix random_affinity(Index n, std::mt19937_64& rng) {
  return build_affinity(RepresentationMatrix::from_dense(oracle::random_sparse_zero_diag(n, 0.4, rng)));
}

}  // namespace

TEST_CASE("static_step is subspace preserving on independent subspaces") {
  std::mt19937_64 rng(51);
  const auto sample = oracle::independent_subspaces(12, 3, 3, 20, rng);
  LearnerConfig cfg;
  cfg.k = 3;
  const SparseMatrix c = static_step(make_snapshot(sample.data), cfg).sparse();
  for (Index j = 0; j < c.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(c, j); it; ++it)
      CHECK(sample.labels[static_cast<std::size_t>(it.row())] == sample.labels[static_cast<std::size_t>(j)]);
}

TEST_CASE("affect_step") {
  std::mt19937_64 rng(52);
  const AffinityMatrix prev = random_affinity(8, rng);
  const AffinityMatrix bar = random_affinity(8, rng);

  AffectState state{prev, {}, 1.0};
  CHECK(affect_step(state, bar).weights() == bar.weights());
  state.alpha = 0.0;
  CHECK(affect_step(state, bar).weights() == prev.weights());

  Matrix a(2, 2);
  a << 0.0, 0.2, 0.2, 0.0;
  Matrix b(2, 2);
  b << 0.0, 0.6, 0.6, 0.0;
  const AffinityMatrix mixed = affect_step(AffectState{AffinityMatrix(a), {}, 0.5}, AffinityMatrix(b));
  CHECK(mixed(0, 1) == doctest::Approx(0.4).epsilon(1e-15));

  for (double alpha : {0.1, 0.5, 0.77}) {
    const Matrix w = affect_step(AffectState{prev, {}, alpha}, bar).weights();
    CHECK(w == w.transpose());
    CHECK(w.minCoeff() >= 0.0);
  }

  CHECK_THROWS_AS(affect_step(AffectState{prev, {}, 1.5}, bar), Error);
  CHECK_THROWS_AS(affect_step(AffectState{prev, {}, 0.5}, random_affinity(7, rng)), Error);
}

TEST_CASE("align_affinity carries surviving pairs") {
  Matrix w(3, 3);
  w << 0, 1, 2,
       1, 0, 3,
       2, 3, 0;
  const std::vector<PointId> old_ids{5, 6, 7};
  const std::vector<PointId> new_ids{7, 8, 5};
  const Matrix out = align_affinity(AffinityMatrix(w), old_ids, new_ids).weights();
  CHECK(out(0, 2) == 2.0);
  CHECK(out(2, 0) == 2.0);
  CHECK(out.row(1).isZero(0.0));
  CHECK(out.col(1).isZero(0.0));
}
