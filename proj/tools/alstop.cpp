#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "alstop/corpus.hpp"
#include "alstop/experiment.hpp"
#include "alstop/rng.hpp"
#include "alstop/synth.hpp"

using namespace alstop;

namespace {

// Shared run/sweep flags layered over an optional JSON config file; any flag
// given on the command line wins over the file.
void add_spec_options(CLI::App* cmd, ExperimentSpec& spec, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON file with the same keys as the flags");
  cmd->add_option("--dataset", spec.dataset, "sparse vector file or class-directory root");
  cmd->add_option("--format", spec.format, "svmlight or classdirs (default: detect)");
  cmd->add_option("--task", spec.task, "positive class name for classdirs");
  cmd->add_option("--folds", spec.folds, "cross-validation folds");
  cmd->add_option("--learner", spec.learner, "svm or maxent");
  cmd->add_option("--cost", spec.cost, "svm hinge weight C");
  cmd->add_option("--lambda", spec.lambda, "maxent L2 strength");
  cmd->add_option("--tolerance", spec.tolerance, "solver convergence tolerance");
  cmd->add_option("--batch-size", spec.batch_size, "queried instances per iteration (0 = auto)");
  cmd->add_option("--seed-size", spec.seed_size, "initial labeled set size (0 = auto)");
  cmd->add_option("--max-iterations", spec.max_iterations,
                  "cap on query iterations (-1 = run to pool exhaustion)");
  cmd->add_option("--kappa-cutoff", spec.kappa_cutoff, "agreement cutoff");
  cmd->add_option("--window", spec.window, "agreement window length");
  cmd->add_option("--stop-set-size", spec.stop_set_size, "stop set size");
  cmd->add_option("--criteria", spec.criteria, "criteria to report")->delimiter(',');
  cmd->add_option("--min-count", spec.min_count, "vocabulary occurrence threshold");
  cmd->add_option("--seed", spec.seed, "master seed");
  cmd->add_option("--jobs", spec.jobs, "fold worker threads");
  cmd->add_option("--out", spec.out, "output directory");
  cmd->add_flag("--dump-predictions", spec.dump_predictions,
                "write per-model stop-set predictions");
}

ExperimentSpec resolve_spec(const CLI::App* cmd, const ExperimentSpec& flags,
                            const std::string& config_path) {
  if (config_path.empty()) return flags;
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config " + config_path);
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentSpec spec = spec_from_json(text.str());
  ExperimentSpec out = spec;
  // Re-apply every flag the user actually passed.
  auto seen = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (seen("--dataset")) out.dataset = flags.dataset;
  if (seen("--format")) out.format = flags.format;
  if (seen("--task")) out.task = flags.task;
  if (seen("--folds")) out.folds = flags.folds;
  if (seen("--learner")) out.learner = flags.learner;
  if (seen("--cost")) out.cost = flags.cost;
  if (seen("--lambda")) out.lambda = flags.lambda;
  if (seen("--tolerance")) out.tolerance = flags.tolerance;
  if (seen("--batch-size")) out.batch_size = flags.batch_size;
  if (seen("--seed-size")) out.seed_size = flags.seed_size;
  if (seen("--max-iterations")) out.max_iterations = flags.max_iterations;
  if (seen("--kappa-cutoff")) out.kappa_cutoff = flags.kappa_cutoff;
  if (seen("--window")) out.window = flags.window;
  if (seen("--stop-set-size")) out.stop_set_size = flags.stop_set_size;
  if (seen("--criteria")) out.criteria = flags.criteria;
  if (seen("--min-count")) out.min_count = flags.min_count;
  if (seen("--seed")) out.seed = flags.seed;
  if (seen("--jobs")) out.jobs = flags.jobs;
  if (seen("--out")) out.out = flags.out;
  if (seen("--dump-predictions")) out.dump_predictions = flags.dump_predictions;
  return out;
}

int do_run(const ExperimentSpec& spec) {
  ExperimentResult result = run_experiment(spec);
  std::cout << render_summary_table(result.summary);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "outputs in " << result.out_dir << '\n';
  return 0;
}

int do_sweep(const ExperimentSpec& spec) {
  std::vector<SweepRow> rows = sweep_experiment(spec);
  std::cout << "axis: " << spec.sweep << '\n';
  for (const auto& row : rows)
    std::cout << row.value << ": mean_annotations=" << row.mean_annotations
              << " mean_F=" << row.mean_f * 100.0 << (row.censored ? " (censored folds)" : "")
              << '\n';
  std::cout << "outputs in " << spec.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pool-based active-learning simulation with stopping criteria"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string config_path;

  auto* run = app.add_subcommand("run", "cross-validated active-learning experiment");
  add_spec_options(run, spec, config_path);

  auto* sweep = app.add_subcommand("sweep", "parameter sweep (one axis per invocation)");
  add_spec_options(sweep, spec, config_path);
  sweep->add_option("--sweep", spec.sweep, "intensity, longevity, or stop-set-size")->required();
  sweep->add_option("--sweep-values", spec.sweep_values, "axis values")
      ->required()
      ->delimiter(',');

  auto* prepare = app.add_subcommand("prepare", "vectorize a corpus or generate synthetic data");
  std::string prep_dataset, prep_task, prep_out = "prepared";
  int prep_min_count = 3, prep_folds = 10;
  std::uint64_t prep_seed = 42;
  bool prep_synth = false;
  SynthConfig synth;
  prepare->add_option("--dataset", prep_dataset, "class-directory root");
  prepare->add_option("--task", prep_task, "positive class name");
  prepare->add_option("--min-count", prep_min_count, "vocabulary occurrence threshold");
  prepare->add_option("--folds", prep_folds, "fold count for the written assignment");
  prepare->add_option("--seed", prep_seed, "master seed");
  prepare->add_option("--out", prep_out, "output directory");
  prepare->add_flag("--synth", prep_synth, "generate the synthetic dataset instead");
  prepare->add_option("--synth-n", synth.n, "synthetic example count");
  prepare->add_option("--synth-dim", synth.dim, "synthetic feature count");
  prepare->add_option("--synth-noise", synth.label_noise, "synthetic label noise rate");

  auto* report = app.add_subcommand("report", "rebuild tables and plots for a finished run");
  std::string report_dir;
  report->add_option("run_dir", report_dir, "run directory with manifest.json")->required();

  auto* replay = app.add_subcommand("replay", "re-run from a manifest and verify trace digests");
  std::string replay_manifest, replay_out = "replay_out";
  replay->add_option("manifest", replay_manifest, "manifest.json of the recorded run")
      ->required();
  replay->add_option("--out", replay_out, "directory for the re-run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(resolve_spec(run, spec, config_path));
    if (sweep->parsed()) {
      ExperimentSpec resolved = resolve_spec(sweep, spec, config_path);
      resolved.sweep = spec.sweep;
      resolved.sweep_values = spec.sweep_values;
      return do_sweep(resolved);
    }
    if (prepare->parsed()) {
      std::filesystem::create_directories(prep_out);
      if (prep_synth) {
        synth.seed = prep_seed;
        Dataset ds = generate_synthetic(synth);
        save_sparse_file(prep_out + "/synthetic.svm", ds);
        FoldPlan plan = make_folds(static_cast<int>(ds.examples.size()), prep_folds,
                                   derive_seed(prep_seed, "folds"));
        write_fold_manifest(prep_out + "/folds.csv", plan);
        std::cout << "wrote " << prep_out << "/synthetic.svm (" << ds.examples.size()
                  << " examples, " << ds.dim << " features)\n";
        return 0;
      }
      if (prep_dataset.empty()) throw std::runtime_error("prepare needs --dataset or --synth");
      std::vector<Document> docs = load_class_dirs(prep_dataset, prep_task);
      auto [vocab, examples] = tokenize_and_binarize(docs, prep_min_count);
      Dataset ds;
      ds.examples = std::move(examples);
      ds.dim = static_cast<int>(vocab.term_index.size());
      save_sparse_file(prep_out + "/vectors.svm", ds);
      dump_vocabulary(prep_out + "/vocab.txt", vocab);
      FoldPlan plan = make_folds(static_cast<int>(ds.examples.size()), prep_folds,
                                 derive_seed(prep_seed, "folds"));
      write_fold_manifest(prep_out + "/folds.csv", plan);
      std::cout << "wrote " << prep_out << "/vectors.svm (" << ds.examples.size()
                << " examples, " << ds.dim << " features)\n";
      return 0;
    }
    if (report->parsed()) {
      std::vector<CriterionSummary> summary = report_experiment(report_dir);
      std::cout << render_summary_table(summary);
      return 0;
    }
    if (replay->parsed()) {
      ReplayReport rep = replay_experiment(replay_manifest, replay_out);
      std::cout << rep.message << '\n';
      return rep.ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
