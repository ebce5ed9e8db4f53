#include "cesm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cesm {

AlphaObjective::AlphaObjective(const Matrix& x, const RepresentationMatrix& u,
                               const RepresentationMatrix& c_prev) {
  if (u.size() != x.cols() || c_prev.size() != x.cols()) {
    fail(ErrorKind::DimensionMismatch, "U and C_prev must match the point count");
  }
  const Matrix xc = x * c_prev.sparse();
  base_ = x - xc;
  direction_ = x * u.sparse() - xc;
}

double golden_section_alpha(const Matrix& x, const RepresentationMatrix& u,
                            const RepresentationMatrix& c_prev, const GoldenSectionOptions& opts) {
  const AlphaObjective f(x, u, c_prev);
  if (f.direction().norm() <= opts.flat_tol) return 0.5;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < opts.max_iters && (b - a) > opts.tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  double best_value = f(best);
  for (double endpoint : {0.0, 1.0}) {
    const double v = f(endpoint);
    if (v < best_value) {
      best = endpoint;
      best_value = v;
    }
  }
  return best;
}

RepresentationMatrix assemble(const RepresentationMatrix& u, const RepresentationMatrix& c_prev, double alpha,
                              double floor) {
  if (u.size() != c_prev.size()) fail(ErrorKind::DimensionMismatch, "U and C_prev differ in size");
  SparseMatrix c = alpha * u.sparse() + (1.0 - alpha) * c_prev.sparse();
  RepresentationMatrix out(std::move(c));
  out.prune(floor);
  return out;
}

CesmState cesm_initial_step(const Snapshot& x1, const LearnerConfig& learner) {
  if (x1.size() < 2) fail(ErrorKind::DegenerateProblem, "self-expression needs at least two points");
  LearnerResult res = learn(x1.data, x1.data, learner);
  CesmState state;
  state.c_prev = res.u;
  state.u_prev = std::move(res.u);
  state.alpha_prev = 0.5;
  state.point_ids = x1.point_ids;
  state.learner = learner;
  return state;
}

StepResult cesm_step(const Snapshot& xt, CesmState& state, const GoldenSectionOptions& opts) {
  if (state.c_prev.size() != xt.size() || state.u_prev.size() != xt.size()) {
    fail(ErrorKind::DimensionMismatch, "state is not aligned with the snapshot; call adjust_state first");
  }
  if (xt.size() < 2) fail(ErrorKind::DegenerateProblem, "self-expression needs at least two points");

  StepResult out;
  out.alpha_search = golden_section_alpha(xt.data, state.u_prev, state.c_prev, opts);
  out.alpha = std::clamp(out.alpha_search, kAlphaMin, 1.0);
  const Matrix xtilde = compute_xtilde(xt.data, state.c_prev, out.alpha);
  out.learner_info = learn(xt.data, xtilde, state.learner);
  out.u = out.learner_info.u;
  out.c = assemble(out.u, state.c_prev, out.alpha);

  state.c_prev = out.c;
  state.u_prev = out.u;
  state.alpha_prev = out.alpha;
  state.point_ids = xt.point_ids;
  return out;
}

SparseMatrix align_square(const SparseMatrix& m, std::span<const PointId> old_ids,
                          std::span<const PointId> new_ids) {
  if (m.rows() != static_cast<Index>(old_ids.size()) || m.cols() != static_cast<Index>(old_ids.size())) {
    fail(ErrorKind::DimensionMismatch, "matrix does not match the old id list");
  }
  std::unordered_map<PointId, Index> new_pos;
  new_pos.reserve(new_ids.size());
  for (std::size_t i = 0; i < new_ids.size(); ++i) new_pos.emplace(new_ids[i], static_cast<Index>(i));

  std::vector<Index> remap(old_ids.size(), -1);
  for (std::size_t i = 0; i < old_ids.size(); ++i) {
    if (auto it = new_pos.find(old_ids[i]); it != new_pos.end()) remap[i] = it->second;
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index j = 0; j < m.outerSize(); ++j) {
    const Index nj = remap[static_cast<std::size_t>(j)];
    if (nj < 0) continue;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      const Index ni = remap[static_cast<std::size_t>(it.row())];
      if (ni >= 0) triplets.emplace_back(ni, nj, it.value());
    }
  }
  const auto n = static_cast<Index>(new_ids.size());
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

CesmState adjust_state(const CesmState& state, std::span<const PointId> new_ids) {
  if (std::equal(state.point_ids.begin(), state.point_ids.end(), new_ids.begin(), new_ids.end())) {
    return state;
  }
  CesmState out;
  out.c_prev = RepresentationMatrix(align_square(state.c_prev.sparse(), state.point_ids, new_ids));
  out.u_prev = RepresentationMatrix(align_square(state.u_prev.sparse(), state.point_ids, new_ids));
  out.alpha_prev = state.alpha_prev;
  out.point_ids.assign(new_ids.begin(), new_ids.end());
  out.learner = state.learner;
  return out;
}

}  // namespace cesm
