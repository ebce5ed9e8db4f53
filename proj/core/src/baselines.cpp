#include "cesm/baselines.hpp"

#include <unordered_map>

namespace cesm {

RepresentationMatrix static_step(const Snapshot& xt, const LearnerConfig& learner) {
  if (xt.size() < 2) fail(ErrorKind::DegenerateProblem, "self-expression needs at least two points");
  return learn(xt.data, xt.data, learner).u;
}

AffinityMatrix affect_step(const AffectState& state, const AffinityMatrix& a_bar) {
  if (!(state.alpha >= 0.0 && state.alpha <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "AFFECT alpha must lie in [0, 1]");
  }
  if (state.a_prev.size() != a_bar.size()) {
    fail(ErrorKind::DimensionMismatch, "previous affinity is not aligned with the current one");
  }
  const double alpha = state.alpha;
  const Matrix& prev = state.a_prev.weights();
  const Matrix& cur = a_bar.weights();
  const Index n = cur.rows();
  Matrix out(n, n);
  // Elementwise on the upper triangle, mirrored, so symmetry is exact.
  for (Index j = 0; j < n; ++j) {
    out(j, j) = 0.0;
    for (Index i = 0; i < j; ++i) {
      const double w = alpha * cur(i, j) + (1.0 - alpha) * prev(i, j);
      out(i, j) = w;
      out(j, i) = w;
    }
  }
  return AffinityMatrix(std::move(out));
}

AffinityMatrix align_affinity(const AffinityMatrix& a, std::span<const PointId> old_ids,
                              std::span<const PointId> new_ids) {
  if (a.size() != static_cast<Index>(old_ids.size())) {
    fail(ErrorKind::DimensionMismatch, "affinity does not match the old id list");
  }
  std::unordered_map<PointId, Index> old_pos;
  for (std::size_t i = 0; i < old_ids.size(); ++i) old_pos.emplace(old_ids[i], static_cast<Index>(i));
  std::vector<Index> src(new_ids.size(), -1);
  for (std::size_t i = 0; i < new_ids.size(); ++i) {
    if (auto it = old_pos.find(new_ids[i]); it != old_pos.end()) src[i] = it->second;
  }
  const auto n = static_cast<Index>(new_ids.size());
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index sj = src[static_cast<std::size_t>(j)];
    if (sj < 0) continue;
    for (Index i = 0; i < n; ++i) {
      const Index si = src[static_cast<std::size_t>(i)];
      if (si >= 0) out(i, j) = a(si, sj);
    }
  }
  return AffinityMatrix(std::move(out));
}

}  // namespace cesm
