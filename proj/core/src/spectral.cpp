#include "cesm/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

namespace cesm {

namespace {

struct LloydRun {
  std::vector<int> labels;
  double inertia = 0.0;
  std::vector<double> history;
};

Matrix seed_plus_plus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));
  Vector dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= dist2(i);
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = points.row(chosen);
    dist2 = dist2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

// Nearest center per point; lowest center index wins ties.
double assign(const Matrix& points, const Matrix& centers, std::vector<int>& labels, Vector& dist2) {
  double inertia = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Index c = 0; c < centers.rows(); ++c) {
      const double d = (points.row(i) - centers.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    dist2(i) = best;
    inertia += best;
  }
  return inertia;
}

LloydRun lloyd(const Matrix& points, int k, int max_iters, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centers = seed_plus_plus(points, k, rng);
  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> prev;
  Vector dist2(n);

  run.inertia = assign(points, centers, run.labels, dist2);
  run.history.push_back(run.inertia);
  for (int it = 0; it < max_iters; ++it) {
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = run.labels[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move its center to the point farthest from its own center.
        Index far = 0;
        dist2.maxCoeff(&far);
        centers.row(c) = points.row(far);
        dist2(far) = 0.0;
      }
    }
    prev = run.labels;
    run.inertia = assign(points, centers, run.labels, dist2);
    run.history.push_back(run.inertia);
    if (run.labels == prev) break;
  }
  return run;
}

}  // namespace

void SpectralConfig::validate() const {
  if (n < 1) fail(ErrorKind::InvalidArgument, "cluster count must be >= 1");
  if (kmeans_restarts < 1) fail(ErrorKind::InvalidArgument, "kmeans_restarts must be >= 1");
  if (kmeans_max_iters < 0) fail(ErrorKind::InvalidArgument, "kmeans_max_iters must be >= 0");
}

KMeansResult kmeans(const Matrix& points, int k, const SpectralConfig& cfg) {
  cfg.validate();
  if (k < 1 || k > points.rows()) fail(ErrorKind::InvalidArgument, "k must lie in [1, number of points]");
  std::mt19937_64 rng(cfg.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.kmeans_restarts; ++r) {
    LloydRun run = lloyd(points, k, cfg.kmeans_max_iters, rng);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.restart = r;
      best.labeling.labels = std::move(run.labels);
      best.labeling.n = k;
      best.inertia_history = std::move(run.history);
    }
  }
  return best;
}

SpectralEmbedding spectral_embedding(const AffinityMatrix& a, int n) {
  const Index size = a.size();
  if (n < 1 || n > size) fail(ErrorKind::InvalidArgument, "cluster count must lie in [1, N]");
  const Matrix& w = a.weights();
  const Vector degree = w.rowwise().sum();

  SpectralEmbedding out;
  Vector inv_sqrt(size);
  for (Index i = 0; i < size; ++i) {
    if (degree(i) > 0.0) {
      inv_sqrt(i) = 1.0 / std::sqrt(degree(i));
    } else {
      inv_sqrt(i) = 0.0;
      ++out.isolated;
    }
  }
  Matrix lap = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  if (eig.info() != Eigen::Success) fail(ErrorKind::NotConverged, "Laplacian eigendecomposition failed");
  out.eigenvalues = eig.eigenvalues();
  out.rows = eig.eigenvectors().leftCols(n);
  for (Index i = 0; i < size; ++i) {
    if (degree(i) <= 0.0) {
      out.rows.row(i).setZero();
      continue;
    }
    const double norm = out.rows.row(i).norm();
    if (norm > 0.0) out.rows.row(i) /= norm;
  }
  return out;
}

Labeling spectral_cluster(const AffinityMatrix& a, const SpectralConfig& cfg) {
  cfg.validate();
  if (cfg.n == 1) {
    Labeling all;
    all.labels.assign(static_cast<std::size_t>(a.size()), 0);
    all.n = 1;
    return all;
  }
  const SpectralEmbedding emb = spectral_embedding(a, cfg.n);
  return kmeans(emb.rows, cfg.n, cfg).labeling;
}

}  // namespace cesm
