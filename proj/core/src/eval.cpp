#include "cesm/eval.hpp"

#include <cmath>
#include <map>

#include "cesm/tracking.hpp"

namespace cesm {

namespace {

void check_same_size(const Labeling& a, const Labeling& b) {
  if (a.labels.size() != b.labels.size()) fail(ErrorKind::DimensionMismatch, "labelings cover different point counts");
}

double pairs(double n) { return n * (n - 1.0) / 2.0; }

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

double clustering_error(const Labeling& pred, const Labeling& truth) {
  check_same_size(pred, truth);
  if (pred.labels.empty()) return 0.0;
  Matrix confusion = Matrix::Zero(truth.n, pred.n);
  for (std::size_t i = 0; i < pred.labels.size(); ++i) confusion(truth.labels[i], pred.labels[i]) += 1.0;
  const std::vector<int> match = max_weight_assignment(confusion);
  double correct = 0.0;
  for (std::size_t r = 0; r < match.size(); ++r) {
    if (match[r] >= 0) correct += confusion(static_cast<Index>(r), match[r]);
  }
  return 100.0 * (1.0 - correct / static_cast<double>(pred.labels.size()));
}

double rand_index(const Labeling& pred, const Labeling& truth) {
  check_same_size(pred, truth);
  const auto n = static_cast<double>(pred.labels.size());
  if (pred.labels.size() < 2) fail(ErrorKind::InvalidArgument, "Rand index needs at least two points");
  Matrix contingency = Matrix::Zero(truth.n, pred.n);
  for (std::size_t i = 0; i < pred.labels.size(); ++i) contingency(truth.labels[i], pred.labels[i]) += 1.0;
  double both = 0.0;
  for (Index j = 0; j < contingency.cols(); ++j) {
    for (Index i = 0; i < contingency.rows(); ++i) both += pairs(contingency(i, j));
  }
  double truth_pairs = 0.0;
  for (Index i = 0; i < contingency.rows(); ++i) truth_pairs += pairs(contingency.row(i).sum());
  double pred_pairs = 0.0;
  for (Index j = 0; j < contingency.cols(); ++j) pred_pairs += pairs(contingency.col(j).sum());
  const double total = pairs(n);
  const double agree = total + 2.0 * both - truth_pairs - pred_pairs;
  return 100.0 * agree / total;
}

std::vector<MethodSummary> summarize(const std::vector<RunRow>& rows, int t_min) {
  struct Acc {
    Moments error, ri, alpha, time;
  };
  std::map<std::string, Acc> acc;
  for (const RunRow& r : rows) {
    if (r.t < t_min) continue;
    Acc& a = acc[r.method];
    a.error.add(r.error_pct);
    a.ri.add(r.rand_index_pct);
    a.time.add(r.wall_time_s);
    if (r.alpha) a.alpha.add(*r.alpha);
  }
  std::vector<MethodSummary> out;
  for (const auto& [method, a] : acc) {
    MethodSummary s;
    s.method = method;
    s.rows = a.error.count;
    s.error_mean = a.error.mean();
    s.error_std = a.error.stddev();
    s.rand_index_mean = a.ri.mean();
    s.rand_index_std = a.ri.stddev();
    if (a.alpha.count) s.alpha_mean = a.alpha.mean();
    s.wall_time_mean = a.time.mean();
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

template <typename Field>
std::vector<double> mean_by_t(const std::vector<RunRow>& rows, const std::string& method, int horizon, Field field) {
  std::vector<Moments> m(static_cast<std::size_t>(horizon));
  for (const RunRow& r : rows) {
    if (r.method != method || r.t < 1 || r.t > horizon) continue;
    if (auto v = field(r)) m[static_cast<std::size_t>(r.t - 1)].add(*v);
  }
  std::vector<double> out;
  out.reserve(m.size());
  for (const Moments& x : m) out.push_back(x.count ? x.mean() : std::nan(""));
  return out;
}

}  // namespace

std::vector<double> mean_error_by_t(const std::vector<RunRow>& rows, const std::string& method, int horizon) {
  return mean_by_t(rows, method, horizon, [](const RunRow& r) { return std::optional<double>(r.error_pct); });
}

std::vector<double> mean_alpha_by_t(const std::vector<RunRow>& rows, const std::string& method, int horizon) {
  return mean_by_t(rows, method, horizon, [](const RunRow& r) { return r.alpha; });
}

}  // namespace cesm
