#pragma once

#include <span>

#include "cesm/core.hpp"
#include "cesm/learners.hpp"

namespace cesm {

/// Memoryless subspace clustering: the learner with Xt = X.
RepresentationMatrix static_step(const Snapshot& xt, const LearnerConfig& learner);

/// Affinity smoothing with a fixed weight: A_t = alpha Abar + (1 - alpha) A_prev.
struct AffectState {
  AffinityMatrix a_prev;
  std::vector<PointId> point_ids;
  double alpha = 0.5;
};

AffinityMatrix affect_step(const AffectState& state, const AffinityMatrix& a_bar);

/// Reorders an affinity to `new_ids`; unseen ids get zero rows/columns.
AffinityMatrix align_affinity(const AffinityMatrix& a, std::span<const PointId> old_ids,
                              std::span<const PointId> new_ids);

}  // namespace cesm
