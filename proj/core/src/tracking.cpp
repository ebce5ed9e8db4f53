#include "cesm/tracking.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace cesm {

std::vector<int> max_weight_assignment(const Matrix& weights) {
  const Index rows = weights.rows();
  const Index cols = weights.cols();
  const Index m = std::max(rows, cols);
  std::vector<int> result(static_cast<std::size_t>(rows), -1);
  if (m == 0) return result;

  // Minimize (max - w) on the padded square matrix; padding has w = 0.
  const double top = weights.size() > 0 ? std::max(weights.maxCoeff(), 0.0) : 0.0;
  Matrix cost = Matrix::Constant(m, m, top);
  cost.topLeftCorner(rows, cols) = top - weights.array();

  // Potentials formulation with 1-based sentinels.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(m + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Index i = 1; i <= m; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
        if (cur < minv[ju]) {
          minv[ju] = cur;
          way[ju] = j0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(p[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  for (Index j = 1; j <= m; ++j) {
    const Index i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= rows && j <= cols) result[static_cast<std::size_t>(i - 1)] = static_cast<int>(j - 1);
  }
  return result;
}

namespace {

MatchResult match_from_overlap(Eigen::MatrixXi overlap) {
  MatchResult out;
  out.prev_label_count = static_cast<int>(overlap.rows());
  // Rows of the assignment are current labels.
  const Matrix weights = overlap.transpose().cast<double>();
  out.permutation = max_weight_assignment(weights);
  for (std::size_t c = 0; c < out.permutation.size(); ++c) {
    const int p = out.permutation[c];
    if (p >= 0) out.total_weight += overlap(p, static_cast<Index>(c));
  }
  out.overlap = std::move(overlap);
  return out;
}

}  // namespace

MatchResult hungarian_match(const Labeling& prev, std::span<const PointId> prev_ids, const Labeling& curr,
                            std::span<const PointId> curr_ids) {
  if (prev.labels.size() != prev_ids.size() || curr.labels.size() != curr_ids.size()) {
    fail(ErrorKind::DimensionMismatch, "labeling and id list sizes differ");
  }
  std::unordered_map<PointId, int> prev_label;
  prev_label.reserve(prev_ids.size());
  for (std::size_t i = 0; i < prev_ids.size(); ++i) prev_label.emplace(prev_ids[i], prev.labels[i]);

  Eigen::MatrixXi overlap = Eigen::MatrixXi::Zero(prev.n, curr.n);
  for (std::size_t i = 0; i < curr_ids.size(); ++i) {
    if (auto it = prev_label.find(curr_ids[i]); it != prev_label.end()) {
      ++overlap(it->second, curr.labels[i]);
    }
  }
  return match_from_overlap(std::move(overlap));
}

MatchResult hungarian_match(const Labeling& prev, const Labeling& curr) {
  if (prev.labels.size() != curr.labels.size()) {
    fail(ErrorKind::DimensionMismatch, "labelings cover different point counts");
  }
  Eigen::MatrixXi overlap = Eigen::MatrixXi::Zero(prev.n, curr.n);
  for (std::size_t i = 0; i < curr.labels.size(); ++i) ++overlap(prev.labels[i], curr.labels[i]);
  return match_from_overlap(std::move(overlap));
}

Labeling relabel(const Labeling& curr, const MatchResult& match) {
  if (static_cast<int>(match.permutation.size()) != curr.n) {
    fail(ErrorKind::DimensionMismatch, "match was not produced from this labeling");
  }
  std::vector<int> rename(static_cast<std::size_t>(curr.n));
  int next = match.prev_label_count;
  for (int c = 0; c < curr.n; ++c) {
    const int p = match.permutation[static_cast<std::size_t>(c)];
    rename[static_cast<std::size_t>(c)] = p >= 0 ? p : next++;
  }
  Labeling out;
  out.labels.reserve(curr.labels.size());
  for (int l : curr.labels) out.labels.push_back(rename[static_cast<std::size_t>(l)]);
  out.n = std::max(next, match.prev_label_count);
  return out;
}

}  // namespace cesm
