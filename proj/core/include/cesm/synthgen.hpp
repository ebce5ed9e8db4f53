#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

using Rng = std::mt19937_64;

/// Points of subspace `absorb_from` are carried by `absorb_into` for
/// time steps t_start <= t < t_end (1-based).
struct MergeEvent {
  int absorb_from = 9;
  int absorb_into = 8;
  int t_start = 6;
  int t_end = 13;
};

/// Rotating union-of-subspaces scenario. Defaults reproduce the 10 x 500
/// setting with ten 6-dimensional subspaces and 45 degree steps.
struct ScenarioConfig {
  int ambient_dim = 10;
  int subspace_dim = 6;
  int subspaces = 10;
  int points_per_subspace = 50;
  int horizon = 20;
  double rotation_deg = 45.0;
  std::optional<MergeEvent> merge;
  int trials = 20;
  std::uint64_t seed = 1;

  void validate() const;
  std::uint64_t trial_seed(int trial) const { return seed + static_cast<std::uint64_t>(trial); }
};

/// Top d left singular vectors of a D x D Gaussian matrix, one per subspace.
std::vector<Matrix> random_subspaces(const ScenarioConfig& cfg, Rng& rng);

/// m unit-norm points B g / ||B g|| with Gaussian g.
Matrix sample_points(const Matrix& basis, Index m, Rng& rng);

/// Rotation by theta in a uniformly random 2-plane of R^dim.
Matrix random_plane_rotation(Index dim, double theta_deg, Rng& rng);

/// R B for a fresh random plane rotation R, re-orthonormalized.
Matrix rotate_basis(const Matrix& basis, double theta_deg, Rng& rng);

/// Snapshots t = 1..T with truth labels and ids 0..N-1 (subspace-major).
EvolvingSequence generate_sequence(const ScenarioConfig& cfg, Rng& rng);

}  // namespace cesm
