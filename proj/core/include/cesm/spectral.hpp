#pragma once

#include <cstdint>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

struct SpectralConfig {
  int n = 2;
  int kmeans_restarts = 20;
  int kmeans_max_iters = 300;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KMeansResult {
  Labeling labeling;
  double inertia = 0.0;
  int restart = 0;                      // index of the winning restart
  std::vector<double> inertia_history;  // per Lloyd iteration, winning restart
};

/// Lloyd iterations from k-means++ seeding; rows of `points` are samples.
/// Returns the restart with the smallest within-cluster sum of squares
/// (ties go to the lowest restart index).
KMeansResult kmeans(const Matrix& points, int k, const SpectralConfig& cfg);

struct SpectralEmbedding {
  Matrix rows;          // N x n, row-normalized
  Vector eigenvalues;   // all eigenvalues of L_sym, ascending
  Index isolated = 0;   // vertices with zero degree (zero embedding rows)
};

/// Eigenvectors of the n smallest eigenvalues of I - D^-1/2 A D^-1/2.
SpectralEmbedding spectral_embedding(const AffinityMatrix& a, int n);

Labeling spectral_cluster(const AffinityMatrix& a, const SpectralConfig& cfg);

}  // namespace cesm
