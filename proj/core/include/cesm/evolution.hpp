#pragma once

#include <span>
#include <vector>

#include "cesm/core.hpp"
#include "cesm/learners.hpp"

namespace cesm {

/// Carry-over between time steps of the evolutionary model.
struct CesmState {
  RepresentationMatrix c_prev;
  RepresentationMatrix u_prev;
  double alpha_prev = 0.5;
  std::vector<PointId> point_ids;
  LearnerConfig learner;
};

struct GoldenSectionOptions {
  double tol = 1e-4;
  int max_iters = 60;
  double flat_tol = 1e-10;  // ||X (U - C_prev)||_F at or below: objective is flat
};

/// ||X - X (a U + (1 - a) C_prev)||_F^2 as a function of a.
class AlphaObjective {
 public:
  AlphaObjective(const Matrix& x, const RepresentationMatrix& u, const RepresentationMatrix& c_prev);

  double operator()(double alpha) const { return (base_ - alpha * direction_).squaredNorm(); }

  /// R = X - X C_prev.
  const Matrix& base() const { return base_; }
  /// M = X (U - C_prev).
  const Matrix& direction() const { return direction_; }

 private:
  Matrix base_;
  Matrix direction_;
};

/// Minimizes the alpha objective over [0, 1] by golden-section search.
/// Returns 0.5 when the objective is flat. The bracket midpoint is compared
/// against both endpoints so a boundary minimizer is returned exactly.
double golden_section_alpha(const Matrix& x, const RepresentationMatrix& u,
                            const RepresentationMatrix& c_prev, const GoldenSectionOptions& opts = {});

struct StepResult {
  RepresentationMatrix c;
  RepresentationMatrix u;
  double alpha = 0.5;           // clamped value used for Xt and assembly
  double alpha_search = 0.5;    // raw golden-section output
  LearnerResult learner_info;
};

/// Drop threshold for assembled C_t entries.
constexpr double kAssemblyFloor = 1e-8;

/// C = alpha U + (1 - alpha) C_prev, entries with |value| <= floor dropped.
RepresentationMatrix assemble(const RepresentationMatrix& u, const RepresentationMatrix& c_prev, double alpha,
                              double floor = kAssemblyFloor);

/// Static learner with Xt = X. Seeds U_prev = C_prev = C_1 and alpha_prev = 0.5.
CesmState cesm_initial_step(const Snapshot& x1, const LearnerConfig& learner);

/// One alternation: alpha from (U_prev, C_prev), then U from Xt, then assembly.
/// `state` must already be aligned with `xt` (see adjust_state). On return
/// the state holds C_t, U_t, alpha_t.
StepResult cesm_step(const Snapshot& xt, CesmState& state, const GoldenSectionOptions& opts = {});

/// Restricts a square sparse matrix to `old_ids` ∩ `new_ids` and reorders
/// it to `new_ids`; rows/columns for unseen ids are zero.
SparseMatrix align_square(const SparseMatrix& m, std::span<const PointId> old_ids,
                          std::span<const PointId> new_ids);

/// Removes vanished points and inserts zero rows/columns for new ones.
CesmState adjust_state(const CesmState& state, std::span<const PointId> new_ids);

}  // namespace cesm
