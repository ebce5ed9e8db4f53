#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cesm/core.hpp"
#include "cesm/eval.hpp"
#include "cesm/learners.hpp"
#include "cesm/spectral.hpp"
#include "cesm/synthgen.hpp"

namespace cesm {

enum class Method { Cesm, Static, Affect };

std::string method_name(Method m);
Method parse_method(const std::string& name);
LearnerMethod parse_learner(const std::string& name);
std::string learner_name(LearnerMethod m);

struct ExperimentConfig {
  std::optional<ScenarioConfig> scenario;         // synthetic data
  std::optional<std::filesystem::path> sequence;  // or an external manifest
  std::vector<Method> methods{Method::Cesm, Method::Static, Method::Affect};
  LearnerConfig learner;
  SpectralConfig spectral;   // n is used only when snapshots carry no truth
  double affect_alpha = 0.5;
  std::filesystem::path output_dir = "results";
  int aggregate_t_min = 2;
  bool record_timing = true;
  bool strict = false;       // escalate ADMM non-convergence to an error
  int threads = 1;
  bool keep_labels = false;  // retain tracked labels in the result

  void validate() const;
};

struct TrackedLabels {
  int trial = 0;
  int t = 1;
  std::string method;
  std::vector<PointId> point_ids;
  Labeling labels;
};

struct ExperimentResult {
  std::vector<RunRow> rows;             // sorted by (trial, t, method)
  std::vector<TrackedLabels> labels;    // only with keep_labels
  std::size_t unconverged_steps = 0;
};

/// Runs every configured method over one sequence. Spectral seeds derive
/// from (spectral.seed, trial, t) so all arms see identical k-means seeds.
ExperimentResult run_sequence(const EvolvingSequence& seq, const ExperimentConfig& cfg, int trial);

/// All trials (synthetic) or the single external sequence.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// trial,t,method,error_pct,rand_index_pct,alpha,wall_time_s
std::string results_csv(const std::vector<RunRow>& rows, bool record_timing = true);
std::string summary_json(const ExperimentResult& result, const ExperimentConfig& cfg);

/// Writes results.csv and summary.json (and labels.csv with keep_labels).
void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg);

}  // namespace cesm
