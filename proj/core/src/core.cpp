#include "cesm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include <Eigen/SVD>

namespace cesm {

namespace {

constexpr double kZeroColumnNorm = 1e-12;

SparseMatrix strip_diagonal(SparseMatrix m) {
  m.prune([](Index row, Index col, double value) { return row != col && value != 0.0; });
  m.makeCompressed();
  return m;
}

}  // namespace

Snapshot make_snapshot(Matrix data, std::optional<std::vector<int>> truth) {
  Snapshot s;
  s.point_ids.resize(static_cast<std::size_t>(data.cols()));
  std::iota(s.point_ids.begin(), s.point_ids.end(), PointId{0});
  s.data = std::move(data);
  s.truth = std::move(truth);
  validate_snapshot(s);
  return s;
}

void validate_snapshot(const Snapshot& snapshot) {
  const auto n = static_cast<std::size_t>(snapshot.data.cols());
  if (snapshot.point_ids.size() != n) {
    fail(ErrorKind::DimensionMismatch, "point id count " + std::to_string(snapshot.point_ids.size()) +
                                           " != column count " + std::to_string(n));
  }
  if (snapshot.truth && snapshot.truth->size() != n) {
    fail(ErrorKind::DimensionMismatch, "truth label count does not match column count");
  }
  std::unordered_set<PointId> seen;
  for (PointId id : snapshot.point_ids) {
    if (!seen.insert(id).second) {
      fail(ErrorKind::InvalidArgument, "duplicate point id " + std::to_string(id));
    }
  }
}

RepresentationMatrix::RepresentationMatrix(Index n) : coeffs_(n, n) {}

RepresentationMatrix::RepresentationMatrix(SparseMatrix coeffs) {
  if (coeffs.rows() != coeffs.cols()) {
    fail(ErrorKind::DimensionMismatch, "representation matrix must be square");
  }
  coeffs_ = strip_diagonal(std::move(coeffs));
}

RepresentationMatrix RepresentationMatrix::from_dense(const Matrix& dense, double floor) {
  if (dense.rows() != dense.cols()) {
    fail(ErrorKind::DimensionMismatch, "representation matrix must be square");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index j = 0; j < dense.cols(); ++j) {
    for (Index i = 0; i < dense.rows(); ++i) {
      const double v = dense(i, j);
      if (i != j && std::abs(v) > floor && v != 0.0) triplets.emplace_back(i, j, v);
    }
  }
  SparseMatrix s(dense.rows(), dense.cols());
  s.setFromTriplets(triplets.begin(), triplets.end());
  RepresentationMatrix r;
  r.coeffs_ = std::move(s);
  r.coeffs_.makeCompressed();
  return r;
}

void RepresentationMatrix::prune(double floor) {
  coeffs_.prune([floor](Index row, Index col, double value) {
    return row != col && std::abs(value) > floor;
  });
  coeffs_.makeCompressed();
}

AffinityMatrix::AffinityMatrix(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) {
    fail(ErrorKind::DimensionMismatch, "affinity matrix must be square");
  }
  for (Index j = 0; j < weights_.cols(); ++j) {
    if (weights_(j, j) != 0.0) fail(ErrorKind::InvalidArgument, "affinity diagonal must be zero");
    for (Index i = 0; i < j; ++i) {
      if (weights_(i, j) != weights_(j, i)) fail(ErrorKind::InvalidArgument, "affinity must be symmetric");
      if (weights_(i, j) < 0.0) fail(ErrorKind::InvalidArgument, "affinity must be nonnegative");
    }
  }
}

Labeling Labeling::from_labels(std::vector<int> labels) {
  Labeling out;
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) fail(ErrorKind::InvalidArgument, "labels must be nonnegative");
    max_label = std::max(max_label, l);
  }
  out.labels = std::move(labels);
  out.n = max_label + 1;
  return out;
}

Matrix normalize_columns(const Matrix& x) {
  Matrix out = x;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (!(norm >= kZeroColumnNorm)) {
      fail(ErrorKind::ZeroColumn, "column " + std::to_string(j) + " has norm below 1e-12");
    }
    out.col(j) /= norm;
  }
  return out;
}

AffinityMatrix build_affinity(const RepresentationMatrix& c) {
  const Index n = c.size();
  Matrix abs_c = Matrix::Zero(n, n);
  const SparseMatrix& s = c.sparse();
  for (Index j = 0; j < s.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) abs_c(it.row(), it.col()) = std::abs(it.value());
  }
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = 0.0;
    for (Index i = 0; i < j; ++i) {
      const double w = abs_c(i, j) + abs_c(j, i);
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return AffinityMatrix(std::move(a));
}

double residual(const Matrix& x, const SparseMatrix& c) {
  if (c.rows() != x.cols() || c.cols() != x.cols()) {
    fail(ErrorKind::DimensionMismatch, "representation size does not match point count");
  }
  return (x - x * c).squaredNorm();
}

double residual(const Matrix& x, const RepresentationMatrix& c) { return residual(x, c.sparse()); }

PcaProjection pca_project(const Matrix& x, Index dim) {
  if (dim < 1 || dim > std::min(x.rows(), x.cols())) {
    fail(ErrorKind::InvalidArgument, "pca dimension must lie in [1, min(rows, cols)]");
  }
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Matrix basis = svd.matrixU().leftCols(dim);

  const double cutoff = sv.size() > 0 ? sv(0) * 1e-12 : 0.0;
  Index rank = 0;
  for (Index k = 0; k < dim; ++k) {
    if (sv(k) > cutoff && sv(k) > 0.0) {
      ++rank;
      // First nonzero entry positive, for reproducible signs.
      for (Index r = 0; r < basis.rows(); ++r) {
        if (std::abs(basis(r, k)) > 1e-14) {
          if (basis(r, k) < 0.0) basis.col(k) *= -1.0;
          break;
        }
      }
    } else {
      basis.col(k).setZero();
    }
  }

  PcaProjection out;
  out.coordinates = basis.transpose() * x;
  out.basis = std::move(basis);
  out.rank = rank;
  return out;
}

}  // namespace cesm
