#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

/// Percentage of points misassigned under the best one-to-one matching of
/// predicted to true labels. Unequal label counts are zero-padded.
double clustering_error(const Labeling& pred, const Labeling& truth);

/// Unadjusted Rand index, in percent.
double rand_index(const Labeling& pred, const Labeling& truth);

struct RunRow {
  int trial = 0;
  int t = 1;
  std::string method;
  double error_pct = 0.0;
  double rand_index_pct = 0.0;
  std::optional<double> alpha;  // absent for the static arm
  double wall_time_s = 0.0;
};

struct MethodSummary {
  std::string method;
  std::size_t rows = 0;
  double error_mean = 0.0;
  double error_std = 0.0;
  double rand_index_mean = 0.0;
  double rand_index_std = 0.0;
  std::optional<double> alpha_mean;
  double wall_time_mean = 0.0;
};

/// Per-method means and sample standard deviations over rows with t >= t_min.
std::vector<MethodSummary> summarize(const std::vector<RunRow>& rows, int t_min = 2);

/// Mean error per time step for one method, indexed by t - 1.
std::vector<double> mean_error_by_t(const std::vector<RunRow>& rows, const std::string& method, int horizon);
std::vector<double> mean_alpha_by_t(const std::vector<RunRow>& rows, const std::string& method, int horizon);

}  // namespace cesm
