// cesm: run evolutionary subspace clustering experiments.
//
//   cesm synth         generate the rotating-subspace scenario and run the arms
//   cesm run           run the arms on an external manifest sequence
//   cesm dump-scenario write one synthetic trial in the manifest format
//
// Every option can also come from an INI/TOML file given with --config;
// command-line flags override the file.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cesm/experiment.hpp"
#include "cesm/sequence_io.hpp"
#include "cesm/synthgen.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kNumericalError = 4 };

int exit_code_for(cesm::ErrorKind kind) {
  using cesm::ErrorKind;
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
      return kConfigError;
    case ErrorKind::ManifestMissing:
    case ErrorKind::MalformedMatrix:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ZeroColumn:
      return kDataError;
    case ErrorKind::NotConverged:
    case ErrorKind::DegenerateProblem:
    case ErrorKind::RankDeficient:
    case ErrorKind::AlphaTooSmall:
      return kNumericalError;
  }
  return kNumericalError;
}

struct ScenarioFlags {
  cesm::ScenarioConfig cfg;
  bool merge = false;
  cesm::MergeEvent event;

  void attach(CLI::App* app) {
    app->add_option("--ambient-dim", cfg.ambient_dim, "Ambient dimension D")->capture_default_str();
    app->add_option("--subspace-dim", cfg.subspace_dim, "Subspace dimension d")->capture_default_str();
    app->add_option("--subspaces", cfg.subspaces, "Number of subspaces n")->capture_default_str();
    app->add_option("--points-per-subspace", cfg.points_per_subspace)->capture_default_str();
    app->add_option("--horizon", cfg.horizon, "Time steps T")->capture_default_str();
    app->add_option("--rotation", cfg.rotation_deg, "Rotation per step in degrees")->capture_default_str();
    app->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
    app->add_option("--seed", cfg.seed, "Scenario seed; trial i uses seed + i")->capture_default_str();
    app->add_flag("--merge", merge, "Enable the absorption event");
    app->add_option("--merge-from", event.absorb_from, "Absorbed subspace (0-based)")->capture_default_str();
    app->add_option("--merge-into", event.absorb_into, "Absorbing subspace (0-based)")->capture_default_str();
    app->add_option("--merge-start", event.t_start, "First absorbed time step")->capture_default_str();
    app->add_option("--merge-end", event.t_end, "Time step at which points separate again")->capture_default_str();
  }

  cesm::ScenarioConfig finish() const {
    cesm::ScenarioConfig out = cfg;
    if (merge) out.merge = event;
    return out;
  }
};

struct RunFlags {
  cesm::ExperimentConfig cfg;
  std::vector<std::string> methods{"cesm", "static", "affect"};
  std::string learner = "omp";
  std::string admm_update = "derived";
  double lambda = 0.0;
  double rho = 0.0;
  bool no_timing = false;
  std::string output = "results";

  void attach(CLI::App* app) {
    app->add_option("--methods", methods, "Subset of cesm, static, affect")->delimiter(',')->capture_default_str();
    app->add_option("--learner", learner, "omp, aols or bp")->capture_default_str();
    app->add_option("--k", cfg.learner.k, "Greedy iterations per column")->capture_default_str();
    app->add_option("--lookahead", cfg.learner.lookahead, "AOLS selections per iteration")->capture_default_str();
    app->add_option("--lambda", lambda, "BP weight (0: automatic)");
    app->add_option("--lambda-scale", cfg.learner.lambda_scale, "Automatic lambda numerator")->capture_default_str();
    app->add_option("--rho", rho, "ADMM penalty (0: equal to lambda)");
    app->add_option("--admm-max-iters", cfg.learner.admm_max_iters)->capture_default_str();
    app->add_option("--admm-tol", cfg.learner.admm_tol)->capture_default_str();
    app->add_option("--admm-update", admm_update, "derived or as_printed")->capture_default_str();
    app->add_option("--residual-stop", cfg.learner.residual_stop, "Relative greedy stop")->capture_default_str();
    app->add_option("--clusters", cfg.spectral.n, "Cluster count when no truth labels are given")->capture_default_str();
    app->add_option("--restarts", cfg.spectral.kmeans_restarts, "k-means restarts")->capture_default_str();
    app->add_option("--kmeans-max-iters", cfg.spectral.kmeans_max_iters)->capture_default_str();
    app->add_option("--spectral-seed", cfg.spectral.seed)->capture_default_str();
    app->add_option("--affect-alpha", cfg.affect_alpha, "Fixed AFFECT smoothing weight")->capture_default_str();
    app->add_option("--t-min", cfg.aggregate_t_min, "First time step in summary means")->capture_default_str();
    app->add_option("--threads", cfg.threads, "Worker threads across trials")->capture_default_str();
    app->add_option("-o,--output", output, "Output directory")->capture_default_str();
    app->add_flag("--no-timing", no_timing, "Leave wall_time_s empty (bitwise reproducible output)");
    app->add_flag("--strict", cfg.strict, "Fail when ADMM does not converge");
    app->add_flag("--labels", cfg.keep_labels, "Also write tracked labels to labels.csv");
  }

  cesm::ExperimentConfig finish() const {
    cesm::ExperimentConfig out = cfg;
    out.methods.clear();
    for (const auto& m : methods) out.methods.push_back(cesm::parse_method(m));
    out.learner.method = cesm::parse_learner(learner);
    if (admm_update == "derived") {
      out.learner.admm_update = cesm::AdmmUpdate::Derived;
    } else if (admm_update == "as_printed") {
      out.learner.admm_update = cesm::AdmmUpdate::AsPrinted;
    } else {
      cesm::fail(cesm::ErrorKind::Config, "--admm-update must be derived or as_printed");
    }
    if (lambda > 0.0) out.learner.lambda = lambda;
    if (rho > 0.0) out.learner.rho = rho;
    out.record_timing = !no_timing;
    out.output_dir = output;
    return out;
  }
};

void print_summary(const cesm::ExperimentResult& result, const cesm::ExperimentConfig& cfg) {
  for (const auto& s : cesm::summarize(result.rows, cfg.aggregate_t_min)) {
    std::cout << s.method << ": error " << s.error_mean << "% (sd " << s.error_std << "), RI " << s.rand_index_mean
              << "%";
    if (s.alpha_mean) std::cout << ", alpha " << *s.alpha_mean;
    std::cout << "\n";
  }
  if (result.unconverged_steps) {
    std::cerr << "warning: " << result.unconverged_steps << " steps hit the ADMM iteration limit\n";
  }
  std::cout << "wrote " << (cfg.output_dir / "results.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary self-expressive subspace clustering"};
  app.set_config("--config", "", "INI/TOML file with option values");
  app.require_subcommand(1);

  ScenarioFlags synth_scenario;
  RunFlags synth_run;
  auto* synth = app.add_subcommand("synth", "Generate rotating subspaces and run the selected methods");
  synth_scenario.attach(synth);
  synth_run.attach(synth);

  RunFlags ext_run;
  std::string sequence_path;
  auto* run = app.add_subcommand("run", "Run the selected methods on an external sequence");
  run->add_option("--sequence", sequence_path, "Manifest file or directory containing manifest.json")->required();
  ext_run.attach(run);

  ScenarioFlags dump_scenario;
  std::string dump_dir = "scenario";
  int dump_trial = 0;
  auto* dump = app.add_subcommand("dump-scenario", "Write one synthetic trial as a manifest sequence");
  dump_scenario.attach(dump);
  dump->add_option("-o,--output", dump_dir, "Output directory")->capture_default_str();
  dump->add_option("--trial", dump_trial, "Trial index to emit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*synth) {
      cesm::ExperimentConfig cfg = synth_run.finish();
      cfg.scenario = synth_scenario.finish();
      const auto result = cesm::run_experiment(cfg);
      cesm::write_outputs(result, cfg);
      print_summary(result, cfg);
    } else if (*run) {
      cesm::ExperimentConfig cfg = ext_run.finish();
      cfg.sequence = sequence_path;
      const auto result = cesm::run_experiment(cfg);
      cesm::write_outputs(result, cfg);
      print_summary(result, cfg);
    } else if (*dump) {
      const cesm::ScenarioConfig cfg = dump_scenario.finish();
      cfg.validate();
      cesm::Rng rng(cfg.trial_seed(dump_trial));
      cesm::dump_sequence(cesm::generate_sequence(cfg, rng), dump_dir);
      std::cout << "wrote " << dump_dir << "/manifest.json\n";
    }
  } catch (const cesm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}
