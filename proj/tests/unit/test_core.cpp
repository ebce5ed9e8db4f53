#include <doctest.h>

#include <random>

#include "cesm/core.hpp"
#include "oracles.hpp"

using namespace cesm;

TEST_CASE("normalize_columns") {
  SUBCASE("3-4-5 column") {
    Matrix x(2, 1);
    x << 3.0, 4.0;
    const Matrix y = normalize_columns(x);
    CHECK(y(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(y(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("identity is fixed") {
    const Matrix eye = Matrix::Identity(4, 4);
    CHECK(normalize_columns(eye) == eye);
  }
  SUBCASE("random gaussian columns become unit") {
    std::mt19937_64 rng(7);
    const Matrix y = normalize_columns(oracle::random_matrix(10, 500, rng));
    for (Index j = 0; j < y.cols(); ++j) CHECK(std::abs(y.col(j).norm() - 1.0) <= 1e-10);
  }
  SUBCASE("idempotent") {
    std::mt19937_64 rng(8);
    const Matrix once = normalize_columns(oracle::random_matrix(6, 40, rng));
    CHECK((normalize_columns(once) - once).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("zero column is rejected") {
    Matrix x = Matrix::Ones(3, 3);
    x.col(1).setZero();
    try {
      normalize_columns(x);
      FAIL("expected ZeroColumn");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroColumn);
      CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
  }
}

TEST_CASE("RepresentationMatrix keeps an exact zero diagonal") {
  Matrix dense = Matrix::Constant(3, 3, 2.0);
  const RepresentationMatrix r = RepresentationMatrix::from_dense(dense);
  for (Index i = 0; i < 3; ++i) CHECK(r.coeff(i, i) == 0.0);
  CHECK(r.nonzeros() == 6);

  SparseMatrix s(3, 3);
  s.insert(1, 1) = 5.0;
  s.insert(0, 2) = -1.0;
  const RepresentationMatrix from_sparse(s);
  CHECK(from_sparse.coeff(1, 1) == 0.0);
  CHECK(from_sparse.coeff(0, 2) == -1.0);
  CHECK_THROWS_AS(RepresentationMatrix(SparseMatrix(2, 3)), Error);
}

TEST_CASE("build_affinity") {
  SUBCASE("zero in, zero out") {
    const AffinityMatrix a = build_affinity(RepresentationMatrix(5));
    CHECK(a.weights().isZero(0.0));
  }
  SUBCASE("single negative entry") {
    Matrix c = Matrix::Zero(3, 3);
    c(0, 1) = -0.5;
    const AffinityMatrix a = build_affinity(RepresentationMatrix::from_dense(c));
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == 0.5);
    CHECK(a.weights().sum() == 1.0);
  }
  SUBCASE("random sparse inputs: symmetric, nonnegative, zero diagonal") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix c = oracle::random_sparse_zero_diag(12, 0.3, rng);
      const AffinityMatrix a = build_affinity(RepresentationMatrix::from_dense(c));
      const Matrix& w = a.weights();
      CHECK(w == w.transpose());
      CHECK(w.minCoeff() >= 0.0);
      CHECK(w.diagonal().isZero(0.0));
      CHECK((w - (c.cwiseAbs() + c.cwiseAbs().transpose())).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("residual") {
  std::mt19937_64 rng(3);
  const Matrix x = oracle::random_matrix(5, 8, rng);

  CHECK(residual(x, RepresentationMatrix(8)) == doctest::Approx(x.squaredNorm()).epsilon(1e-14));

  SUBCASE("exact self-expression of a duplicated column") {
    Matrix dup = x;
    dup.col(1) = dup.col(0);
    Matrix c = Matrix::Zero(8, 8);
    c(1, 0) = 1.0;
    const Matrix diff = dup - dup * c;
    CHECK(diff.col(0).norm() == 0.0);
    CHECK(residual(dup, RepresentationMatrix::from_dense(c)) ==
          doctest::Approx(dup.squaredNorm() - dup.col(0).squaredNorm()).epsilon(1e-13));
  }

  SUBCASE("matches entrywise brute force") {
    const Matrix c = oracle::random_sparse_zero_diag(8, 0.4, rng);
    double brute = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) {
        double v = x(i, j);
        for (Index l = 0; l < x.cols(); ++l) v -= x(i, l) * c(l, j);
        brute += v * v;
      }
    }
    CHECK(residual(x, RepresentationMatrix::from_dense(c)) == doctest::Approx(brute).epsilon(1e-12));
  }

  SUBCASE("invariant under conformal permutation") {
    const Matrix c = oracle::random_sparse_zero_diag(8, 0.4, rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(8);
    p.setIdentity();
    std::shuffle(p.indices().data(), p.indices().data() + 8, rng);
    const Matrix xp = x * p;
    const Matrix cp = p.transpose() * c * p;
    CHECK(residual(xp, RepresentationMatrix::from_dense(cp)) ==
          doctest::Approx(residual(x, RepresentationMatrix::from_dense(c))).epsilon(1e-12));
  }

  CHECK_THROWS_AS(residual(x, RepresentationMatrix(7)), Error);
}

TEST_CASE("pca_project") {
  std::mt19937_64 rng(5);
  SUBCASE("exact low rank reconstructs") {
    const Matrix x = oracle::random_matrix(12, 3, rng) * oracle::random_matrix(3, 40, rng);
    const PcaProjection p = pca_project(x, 3);
    CHECK(p.rank == 3);
    CHECK((p.basis * p.coordinates - x).norm() < 1e-8);
  }
  SUBCASE("full dimension preserves the Frobenius norm") {
    const Matrix x = oracle::random_matrix(6, 20, rng);
    const PcaProjection p = pca_project(x, 6);
    CHECK(std::abs(p.coordinates.norm() - x.norm()) < 1e-8);
  }
  SUBCASE("rank-3 Gram matrix preserved") {
    const Matrix x = oracle::random_matrix(10, 3, rng) * oracle::random_matrix(3, 25, rng);
    const Matrix y = pca_project(x, 3).coordinates;
    CHECK((y.transpose() * y - x.transpose() * x).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("sign convention: first nonzero basis entry positive") {
    const PcaProjection p = pca_project(oracle::random_matrix(5, 30, rng), 4);
    for (Index k = 0; k < 4; ++k) {
      Index r = 0;
      while (std::abs(p.basis(r, k)) <= 1e-14) ++r;
      CHECK(p.basis(r, k) > 0.0);
    }
  }
  SUBCASE("rank deficiency pads zero rows") {
    const Matrix x = oracle::random_matrix(8, 2, rng) * oracle::random_matrix(2, 20, rng);
    const PcaProjection p = pca_project(x, 4);
    CHECK(p.rank == 2);
    CHECK(p.rank_deficient());
    CHECK(p.coordinates.bottomRows(2).isZero(0.0));
  }
  CHECK_THROWS_AS(pca_project(Matrix::Ones(3, 5), 4), Error);
}
