#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "cesm/errors.hpp"

namespace cesm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Index = Eigen::Index;
using PointId = std::int64_t;

/// One time step of data: columns are points, rows are features.
struct Snapshot {
  Matrix data;
  std::vector<PointId> point_ids;
  std::optional<std::vector<int>> truth;

  Index dim() const { return data.rows(); }
  Index size() const { return data.cols(); }
};

/// Builds a snapshot with ids 0..N-1.
Snapshot make_snapshot(Matrix data, std::optional<std::vector<int>> truth = std::nullopt);

/// Throws if ids are not unique or do not match the column count.
void validate_snapshot(const Snapshot& snapshot);

struct EvolvingSequence {
  std::vector<Snapshot> snapshots;

  std::size_t horizon() const { return snapshots.size(); }
};

/// Square N x N coefficient matrix with an exactly zero diagonal.
///
/// Columns hold the representation of one point in terms of the others.
/// Every constructor strips diagonal entries and explicit zeros, so the
/// invariant holds for any value of this type.
class RepresentationMatrix {
 public:
  RepresentationMatrix() = default;
  explicit RepresentationMatrix(Index n);
  explicit RepresentationMatrix(SparseMatrix coeffs);

  /// Keeps entries with |value| > floor, off the diagonal.
  static RepresentationMatrix from_dense(const Matrix& dense, double floor = 0.0);

  Index size() const { return coeffs_.rows(); }
  Index nonzeros() const { return coeffs_.nonZeros(); }
  const SparseMatrix& sparse() const { return coeffs_; }
  Matrix to_dense() const { return Matrix(coeffs_); }
  double coeff(Index row, Index col) const { return coeffs_.coeff(row, col); }

  /// Drops entries with |value| <= floor.
  void prune(double floor);

 private:
  SparseMatrix coeffs_;
};

/// Symmetric, nonnegative, zero-diagonal N x N weights.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  explicit AffinityMatrix(Index n) : weights_(Matrix::Zero(n, n)) {}

  /// Validates symmetry (exact), nonnegativity and the zero diagonal.
  explicit AffinityMatrix(Matrix weights);

  Index size() const { return weights_.rows(); }
  const Matrix& weights() const { return weights_; }
  double operator()(Index i, Index j) const { return weights_(i, j); }

 private:
  Matrix weights_;
};

/// Cluster assignment of N points. Labels are 0-based and lie in [0, n).
struct Labeling {
  std::vector<int> labels;
  int n = 0;

  std::size_t size() const { return labels.size(); }
  static Labeling from_labels(std::vector<int> labels);
};

Matrix normalize_columns(const Matrix& x);

AffinityMatrix build_affinity(const RepresentationMatrix& c);

/// Squared Frobenius norm of X - X C.
double residual(const Matrix& x, const RepresentationMatrix& c);
double residual(const Matrix& x, const SparseMatrix& c);

struct PcaProjection {
  Matrix coordinates;  // dim x N
  Matrix basis;        // rows x dim, top left singular vectors
  Index rank = 0;      // nonzero singular values among the requested ones
  bool rank_deficient() const { return rank < coordinates.rows(); }
};

/// Coordinates of the columns of X in its top `dim` left singular vectors.
/// Directions with a zero singular value are returned as zero rows.
PcaProjection pca_project(const Matrix& x, Index dim);

}  // namespace cesm
