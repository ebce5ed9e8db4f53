#include "cesm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "cesm/baselines.hpp"
#include "cesm/evolution.hpp"
#include "cesm/sequence_io.hpp"
#include "cesm/tracking.hpp"

namespace cesm {

using json = nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::Cesm: return "cesm";
    case Method::Static: return "static";
    case Method::Affect: return "affect";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "cesm") return Method::Cesm;
  if (name == "static") return Method::Static;
  if (name == "affect") return Method::Affect;
  fail(ErrorKind::Config, "unknown method '" + name + "' (expected cesm, static or affect)");
}

LearnerMethod parse_learner(const std::string& name) {
  if (name == "omp") return LearnerMethod::Omp;
  if (name == "aols") return LearnerMethod::Aols;
  if (name == "bp") return LearnerMethod::Bp;
  fail(ErrorKind::Config, "unknown learner '" + name + "' (expected omp, aols or bp)");
}

std::string learner_name(LearnerMethod m) {
  switch (m) {
    case LearnerMethod::Omp: return "omp";
    case LearnerMethod::Aols: return "aols";
    case LearnerMethod::Bp: return "bp";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (scenario.has_value() == sequence.has_value()) {
    fail(ErrorKind::Config, "exactly one of a synthetic scenario or an external sequence is required");
  }
  if (methods.empty()) fail(ErrorKind::Config, "at least one method is required");
  if (!(affect_alpha >= 0.0 && affect_alpha <= 1.0)) fail(ErrorKind::Config, "affect_alpha must lie in [0, 1]");
  if (threads < 1) fail(ErrorKind::Config, "threads must be >= 1");
  try {
    learner.validate();
    spectral.validate();
    if (scenario) scenario->validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t spectral_seed(std::uint64_t base, int trial, int t) {
  return base + 1000003ULL * static_cast<std::uint64_t>(trial) + static_cast<std::uint64_t>(t);
}

int cluster_count(const Snapshot& s, const SpectralConfig& spectral) {
  int n = spectral.n;
  if (s.truth) {
    std::set<int> distinct(s.truth->begin(), s.truth->end());
    n = static_cast<int>(distinct.size());
  }
  return std::clamp(n, 1, static_cast<int>(s.size()));
}

// Per-method running state across time steps.
struct Arm {
  Method method;
  std::optional<CesmState> cesm;
  std::optional<AffectState> affect;
  std::optional<Labeling> prev_labels;
  std::vector<PointId> prev_ids;
};

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

}  // namespace

ExperimentResult run_sequence(const EvolvingSequence& seq, const ExperimentConfig& cfg, int trial) {
  ExperimentResult out;
  std::vector<Arm> arms;
  for (Method m : cfg.methods) arms.push_back(Arm{m, {}, {}, {}, {}});

  for (std::size_t k = 0; k < seq.snapshots.size(); ++k) {
    const Snapshot& snap = seq.snapshots[k];
    const int t = static_cast<int>(k) + 1;
    SpectralConfig spectral = cfg.spectral;
    spectral.n = cluster_count(snap, cfg.spectral);
    spectral.seed = spectral_seed(cfg.spectral.seed, trial, t);

    for (Arm& arm : arms) {
      const std::string name = method_name(arm.method);
      try {
        RunRow row;
        row.trial = trial;
        row.t = t;
        row.method = name;
        Timer timer;

        AffinityMatrix affinity;
        bool converged = true;
        switch (arm.method) {
          case Method::Static: {
            affinity = build_affinity(static_step(snap, cfg.learner));
            break;
          }
          case Method::Cesm: {
            if (!arm.cesm) {
              arm.cesm = cesm_initial_step(snap, cfg.learner);
              affinity = build_affinity(arm.cesm->c_prev);
            } else {
              *arm.cesm = adjust_state(*arm.cesm, snap.point_ids);
              const StepResult step = cesm_step(snap, *arm.cesm);
              converged = step.learner_info.converged;
              row.alpha = step.alpha;
              affinity = build_affinity(step.c);
            }
            break;
          }
          case Method::Affect: {
            const LearnerResult learned = learn(snap.data, snap.data, cfg.learner);
            converged = learned.converged;
            AffinityMatrix a_bar = build_affinity(learned.u);
            if (!arm.affect) {
              arm.affect = AffectState{std::move(a_bar), snap.point_ids, cfg.affect_alpha};
            } else {
              AffectState aligned{align_affinity(arm.affect->a_prev, arm.affect->point_ids, snap.point_ids),
                                  snap.point_ids, cfg.affect_alpha};
              aligned.a_prev = affect_step(aligned, a_bar);
              row.alpha = cfg.affect_alpha;
              arm.affect = std::move(aligned);
            }
            affinity = arm.affect->a_prev;
            break;
          }
        }
        if (!converged) {
          ++out.unconverged_steps;
          if (cfg.strict) fail(ErrorKind::NotConverged, "ADMM did not reach tolerance");
        }

        Labeling labels = spectral_cluster(affinity, spectral);
        row.wall_time_s = cfg.record_timing ? timer.seconds() : 0.0;

        if (snap.truth) {
          const Labeling truth = Labeling::from_labels(*snap.truth);
          row.error_pct = clustering_error(labels, truth);
          row.rand_index_pct = rand_index(labels, truth);
        } else {
          row.error_pct = std::nan("");
          row.rand_index_pct = std::nan("");
        }

        if (arm.prev_labels) {
          labels = relabel(labels, hungarian_match(*arm.prev_labels, arm.prev_ids, labels, snap.point_ids));
        }
        if (cfg.keep_labels) out.labels.push_back(TrackedLabels{trial, t, name, snap.point_ids, labels});
        arm.prev_labels = std::move(labels);
        arm.prev_ids = snap.point_ids;
        out.rows.push_back(std::move(row));
      } catch (const Error& e) {
        fail(e.kind(), "trial " + std::to_string(trial) + ", method " + name + ", t=" + std::to_string(t) + ": " +
                           e.what());
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult merged;

  if (cfg.sequence) {
    merged = run_sequence(load_sequence(*cfg.sequence), cfg, 0);
  } else {
    const ScenarioConfig& scenario = *cfg.scenario;
    std::vector<ExperimentResult> per_trial(static_cast<std::size_t>(scenario.trials));
    std::vector<std::exception_ptr> errors(per_trial.size());
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int trial = next++; trial < scenario.trials; trial = next++) {
        try {
          Rng rng(scenario.trial_seed(trial));
          per_trial[static_cast<std::size_t>(trial)] = run_sequence(generate_sequence(scenario, rng), cfg, trial);
        } catch (...) {
          errors[static_cast<std::size_t>(trial)] = std::current_exception();
        }
      }
    };
    const int workers = std::min(cfg.threads, scenario.trials);
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (auto& r : per_trial) {
      merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
      merged.labels.insert(merged.labels.end(), r.labels.begin(), r.labels.end());
      merged.unconverged_steps += r.unconverged_steps;
    }
  }

  std::stable_sort(merged.rows.begin(), merged.rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tie(a.trial, a.t, a.method) < std::tie(b.trial, b.t, b.method);
  });
  return merged;
}

namespace {

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json scenario_json(const ScenarioConfig& s) {
  json j = {{"ambient_dim", s.ambient_dim},       {"subspace_dim", s.subspace_dim}, {"subspaces", s.subspaces},
            {"points_per_subspace", s.points_per_subspace}, {"horizon", s.horizon},
            {"rotation_deg", s.rotation_deg},     {"trials", s.trials},             {"seed", s.seed}};
  if (s.merge) {
    j["merge"] = {{"absorb_from", s.merge->absorb_from},
                  {"absorb_into", s.merge->absorb_into},
                  {"t_start", s.merge->t_start},
                  {"t_end", s.merge->t_end}};
  }
  return j;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string results_csv(const std::vector<RunRow>& rows, bool record_timing) {
  std::string out = "trial,t,method,error_pct,rand_index_pct,alpha,wall_time_s\n";
  for (const RunRow& r : rows) {
    out += std::to_string(r.trial) + ',' + std::to_string(r.t) + ',' + r.method + ',' + fixed(r.error_pct) + ',' +
           fixed(r.rand_index_pct) + ',' + (r.alpha ? fixed(*r.alpha) : std::string()) + ',' +
           (record_timing ? fixed(r.wall_time_s) : std::string()) + '\n';
  }
  return out;
}

std::string summary_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
  json methods = json::array();
  for (const MethodSummary& s : summarize(result.rows, cfg.aggregate_t_min)) {
    json m = {{"method", s.method},
              {"rows", s.rows},
              {"error_pct_mean", finite_or_null(s.error_mean)},
              {"error_pct_std", finite_or_null(s.error_std)},
              {"rand_index_pct_mean", finite_or_null(s.rand_index_mean)},
              {"rand_index_pct_std", finite_or_null(s.rand_index_std)},
              {"alpha_mean", optional_number(s.alpha_mean)}};
    if (cfg.record_timing) m["wall_time_s_mean"] = s.wall_time_mean;
    methods.push_back(std::move(m));
  }

  json method_names = json::array();
  for (Method m : cfg.methods) method_names.push_back(method_name(m));
  const LearnerConfig& l = cfg.learner;
  json config = {
      {"methods", method_names},
      {"learner",
       {{"method", learner_name(l.method)},
        {"k", l.k},
        {"lookahead", l.lookahead},
        {"lambda", optional_number(l.lambda)},
        {"rho", optional_number(l.rho)},
        {"lambda_scale", l.lambda_scale},
        {"admm_max_iters", l.admm_max_iters},
        {"admm_tol", l.admm_tol},
        {"admm_update", l.admm_update == AdmmUpdate::Derived ? "derived" : "as_printed"},
        {"residual_stop", l.residual_stop}}},
      {"spectral",
       {{"n", cfg.spectral.n},
        {"kmeans_restarts", cfg.spectral.kmeans_restarts},
        {"kmeans_max_iters", cfg.spectral.kmeans_max_iters},
        {"seed", cfg.spectral.seed}}},
      {"affect_alpha", cfg.affect_alpha},
      {"aggregate_t_min", cfg.aggregate_t_min},
      {"strict", cfg.strict}};
  if (cfg.scenario) config["scenario"] = scenario_json(*cfg.scenario);
  if (cfg.sequence) config["sequence"] = cfg.sequence->generic_string();

  json summary = {{"methods", methods},
                  {"unconverged_steps", result.unconverged_steps},
                  {"config", config},
                  {"versions",
                   {{"cesm", "0.1.0"},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)}}}};
  return summary.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(cfg.output_dir / name, std::ios::binary);
    if (!out) fail(ErrorKind::Config, "cannot write " + (cfg.output_dir / name).string());
    out << text;
  };
  write("results.csv", results_csv(result.rows, cfg.record_timing));
  write("summary.json", summary_json(result, cfg));
  if (cfg.keep_labels) {
    std::string text = "trial,t,method,point_id,label\n";
    for (const TrackedLabels& tl : result.labels) {
      for (std::size_t i = 0; i < tl.point_ids.size(); ++i) {
        text += std::to_string(tl.trial) + ',' + std::to_string(tl.t) + ',' + tl.method + ',' +
                std::to_string(tl.point_ids[i]) + ',' + std::to_string(tl.labels.labels[i]) + '\n';
      }
    }
    write("labels.csv", text);
  }
}

}  // namespace cesm
