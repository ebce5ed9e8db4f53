#pragma once

#include <span>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

/// Maximum-weight one-to-one assignment of rows to columns (Hungarian
/// method, O(n^3) on the zero-padded square problem). Entry r of the result
/// is the matched column or -1 when row r is matched to padding.
std::vector<int> max_weight_assignment(const Matrix& weights);

struct MatchResult {
  std::vector<int> permutation;  // current label -> previous label, -1 when unmatched
  Eigen::MatrixXi overlap;       // n_prev x n_curr shared-point counts
  int prev_label_count = 0;
  long total_weight = 0;
};

/// Matches clusters of `curr` to clusters of `prev` maximizing the number
/// of shared points. Points are identified through the id lists; only ids
/// present in both count.
MatchResult hungarian_match(const Labeling& prev, std::span<const PointId> prev_ids, const Labeling& curr,
                            std::span<const PointId> curr_ids);

/// Same, for two labelings of the same points in the same order.
MatchResult hungarian_match(const Labeling& prev, const Labeling& curr);

/// Renames labels so matched clusters keep their previous id; unmatched
/// clusters get fresh ids starting at prev_label_count.
Labeling relabel(const Labeling& curr, const MatchResult& match);

}  // namespace cesm
