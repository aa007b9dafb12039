#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alstop/engine.hpp"
#include "alstop/eval.hpp"

namespace alstop {

// Everything a cross-validated experiment needs; serialized verbatim into
// the run manifest so a run can be replayed byte-for-byte later.
struct ExperimentSpec {
  std::string dataset;  // sparse vector file or class-directory root
  std::string format;   // "svmlight", "classdirs", or "" = detect by path type
  std::string task;     // positive class for classdirs
  int folds = 10;
  std::string learner = "svm";
  double cost = 1.0;
  double lambda = 1e-4;
  double tolerance = 1e-6;
  int batch_size = 0;  // 0 = by dataset size
  int seed_size = 0;
  long max_iterations = -1;
  double kappa_cutoff = 0.99;
  int window = 3;
  int stop_set_size = 2000;
  std::vector<std::string> criteria = {"sp", "sc2000", "zwh2008", "ls2008", "v2008"};
  double zwh_initial_threshold = 0.9;
  double zwh_raise_step = 0.01;
  double minerr_threshold = 0.9;
  int ls_window = 100;
  double ls_slope_threshold = 0.00005;
  int min_count = 3;  // vocabulary occurrence threshold for classdirs
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out = "out";
  std::string sweep;  // "", "intensity", "longevity", "stop-set-size"
  std::vector<double> sweep_values;
  bool dump_predictions = false;

  SPConfig sp_config() const { return {kappa_cutoff, window, stop_set_size}; }
  CriteriaParams criteria_params() const {
    return {zwh_initial_threshold, zwh_raise_step, minerr_threshold, ls_window,
            ls_slope_threshold};
  }
};

std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const std::string& json_text);

struct ExperimentResult {
  std::string out_dir;
  std::vector<std::string> trace_paths;  // fold order
  std::vector<CriterionSummary> summary;
  std::vector<std::string> warnings;
};

// Runs the k-fold experiment: loads the dataset, assigns folds, simulates
// every fold (spec.jobs worker threads), writes one trace CSV per fold, then
// summarizes by reading those CSVs back. Also writes folds.csv, summary
// files, per-fold and average learning curves, and manifest.json capturing
// the spec, seeds, and content hashes of the dataset and traces.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct SweepRow {
  double value = 0.0;
  double mean_annotations = 0.0;
  double mean_f = 0.0;
  int censored = 0;
};

// Exactly one sweep axis per invocation. intensity/longevity replay the
// prediction-stability rule over the stored agreement columns of a single
// base run; stop-set-size launches a full run per value since the stop set
// itself changes.
std::vector<SweepRow> sweep_experiment(const ExperimentSpec& spec);

// Re-runs a finished experiment from its manifest into out_dir and compares
// trace hashes; returns a human-readable report, ok=false on any mismatch.
struct ReplayReport {
  bool ok = false;
  std::string message;
};
ReplayReport replay_experiment(const std::string& manifest_path, const std::string& out_dir);

// Rebuilds summary tables and plots for a finished run directory.
std::vector<CriterionSummary> report_experiment(const std::string& run_dir);

// 16-hex FNV-1a of a file's bytes, used for manifest content hashes.
std::string file_digest(const std::string& path);

// file_digest for a file; for a directory, a digest over the sorted
// relative paths and per-file digests of every regular file beneath it.
std::string file_digest_tree(const std::string& path);

}  // namespace alstop
