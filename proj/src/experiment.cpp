#include "alstop/experiment.hpp"

#include <atomic>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "alstop/corpus.hpp"
#include "alstop/plot.hpp"
#include "alstop/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace alstop {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string file_digest_tree(const std::string& path) {
  if (!fs::is_directory(path)) return file_digest(path);
  std::vector<std::string> entries;
  for (const auto& entry : fs::recursive_directory_iterator(path))
    if (entry.is_regular_file()) {
      const std::string rel = fs::relative(entry.path(), path).generic_string();
      entries.push_back(rel + ":" + file_digest(entry.path().string()));
    }
  std::sort(entries.begin(), entries.end());
  std::string combined;
  for (const auto& e : entries) {
    combined += e;
    combined += '\n';
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(combined)));
  return hex;
}

std::string spec_to_json(const ExperimentSpec& s) {
  json j;
  j["dataset"] = s.dataset;
  j["format"] = s.format;
  j["task"] = s.task;
  j["folds"] = s.folds;
  j["learner"] = s.learner;
  j["cost"] = s.cost;
  j["lambda"] = s.lambda;
  j["tolerance"] = s.tolerance;
  j["batch_size"] = s.batch_size;
  j["seed_size"] = s.seed_size;
  j["max_iterations"] = s.max_iterations;
  j["kappa_cutoff"] = s.kappa_cutoff;
  j["window"] = s.window;
  j["stop_set_size"] = s.stop_set_size;
  j["criteria"] = s.criteria;
  j["zwh_initial_threshold"] = s.zwh_initial_threshold;
  j["zwh_raise_step"] = s.zwh_raise_step;
  j["minerr_threshold"] = s.minerr_threshold;
  j["ls_window"] = s.ls_window;
  j["ls_slope_threshold"] = s.ls_slope_threshold;
  j["min_count"] = s.min_count;
  j["seed"] = s.seed;
  j["jobs"] = s.jobs;
  j["out"] = s.out;
  j["sweep"] = s.sweep;
  j["sweep_values"] = s.sweep_values;
  j["dump_predictions"] = s.dump_predictions;
  return j.dump(2);
}

ExperimentSpec spec_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentSpec s;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("dataset", s.dataset);
  get("format", s.format);
  get("task", s.task);
  get("folds", s.folds);
  get("learner", s.learner);
  get("cost", s.cost);
  get("lambda", s.lambda);
  get("tolerance", s.tolerance);
  get("batch_size", s.batch_size);
  get("seed_size", s.seed_size);
  get("max_iterations", s.max_iterations);
  get("kappa_cutoff", s.kappa_cutoff);
  get("window", s.window);
  get("stop_set_size", s.stop_set_size);
  get("criteria", s.criteria);
  get("zwh_initial_threshold", s.zwh_initial_threshold);
  get("zwh_raise_step", s.zwh_raise_step);
  get("minerr_threshold", s.minerr_threshold);
  get("ls_window", s.ls_window);
  get("ls_slope_threshold", s.ls_slope_threshold);
  get("min_count", s.min_count);
  get("seed", s.seed);
  get("jobs", s.jobs);
  get("out", s.out);
  get("sweep", s.sweep);
  get("sweep_values", s.sweep_values);
  get("dump_predictions", s.dump_predictions);
  return s;
}

namespace {

std::string detect_format(const ExperimentSpec& spec) {
  if (!spec.format.empty()) {
    if (spec.format != "svmlight" && spec.format != "classdirs")
      throw std::invalid_argument("unknown format '" + spec.format +
                                  "' (expected svmlight or classdirs)");
    return spec.format;
  }
  if (fs::is_directory(spec.dataset)) return "classdirs";
  return "svmlight";
}

ALConfig al_config(const ExperimentSpec& spec, std::uint64_t run_seed) {
  ALConfig cfg;
  cfg.batch_size = spec.batch_size;
  cfg.seed_size = spec.seed_size;
  cfg.learner.kind = learner_from_name(spec.learner);
  cfg.learner.cost = spec.cost;
  cfg.learner.lambda = spec.lambda;
  cfg.learner.tolerance = spec.tolerance;
  cfg.sp = spec.sp_config();
  cfg.criteria = spec.criteria_params();
  cfg.max_iterations = spec.max_iterations;
  cfg.run_seed = run_seed;
  return cfg;
}

SummaryOptions summary_options(const ExperimentSpec& spec) {
  SummaryOptions opts;
  opts.criteria = spec.criteria;
  opts.learner = learner_from_name(spec.learner);
  opts.sp = spec.sp_config();
  opts.params = spec.criteria_params();
  return opts;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.dataset.empty()) throw std::invalid_argument("no dataset given");
  if (spec.folds < 2) throw std::invalid_argument("folds must be at least 2");
  if (spec.window < 1) throw std::invalid_argument("window must be at least 1");
  if (!(spec.kappa_cutoff > 0.0 && spec.kappa_cutoff <= 1.0))
    throw std::invalid_argument("kappa cutoff must be in (0, 1]");
  if (spec.stop_set_size < 1) throw std::invalid_argument("stop set size must be at least 1");
  if (spec.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  for (const auto& c : spec.criteria) criterion_index(c);  // validates names
  learner_from_name(spec.learner);
}

struct LoadedData {
  std::string format;
  Dataset vectors;              // svmlight path
  std::vector<Document> docs;   // classdirs path
  int n = 0;
};

LoadedData load_input(const ExperimentSpec& spec) {
  LoadedData data;
  data.format = detect_format(spec);
  if (data.format == "svmlight") {
    data.vectors = load_sparse_file(spec.dataset);
    data.n = static_cast<int>(data.vectors.examples.size());
  } else {
    data.docs = load_class_dirs(spec.dataset, spec.task);
    data.n = static_cast<int>(data.docs.size());
  }
  return data;
}

// classdirs folds rebuild the vocabulary from the fold's training documents
// only, then featurize every document with it; held-out terms outside that
// vocabulary vanish, so no test text influences the features.
Dataset fold_dataset(const LoadedData& data, const FoldPlan& plan, int fold, int min_count) {
  std::vector<Document> train_docs;
  for (int i = 0; i < static_cast<int>(data.docs.size()); ++i)
    if (plan.assignment[i] != fold) train_docs.push_back(data.docs[i]);
  Vocabulary vocab = build_vocabulary(train_docs, min_count);
  Dataset ds;
  ds.dim = static_cast<int>(vocab.term_index.size());
  ds.examples.reserve(data.docs.size());
  for (int i = 0; i < static_cast<int>(data.docs.size()); ++i)
    ds.examples.push_back(featurize(data.docs[i], vocab, i));
  return ds;
}

std::string fold_trace_path(const std::string& out_dir, int fold) {
  return out_dir + "/trace_fold" + std::to_string(fold) + ".csv";
}

void write_fold_outputs(const std::string& out_dir, int fold, const RunResult& result) {
  write_trace_csv(fold_trace_path(out_dir, fold), result.trace);
  if (!result.stopset_predictions.empty()) {
    std::ofstream preds(out_dir + "/preds_fold" + std::to_string(fold) + ".txt");
    for (std::size_t m = 0; m < result.stopset_predictions.size(); ++m) {
      preds << m << ' ';
      for (int p : result.stopset_predictions[m]) preds << (p > 0 ? '+' : '-');
      preds << '\n';
    }
  }
}

void write_plots(const std::string& out_dir, const std::vector<RunTrace>& traces,
                 const std::vector<CriterionSummary>& summary, const SummaryOptions& opts) {
  for (std::size_t fold = 0; fold < traces.size(); ++fold) {
    std::vector<std::pair<std::string, long>> stops;
    for (const auto& row : summary) {
      if (row.not_applicable) continue;
      const FoldStop& fs = row.folds[fold];
      if (!fs.censored) stops.emplace_back(row.name, fs.annotations);
    }
    render_learning_curve(traces[fold], stops,
                          out_dir + "/curve_fold" + std::to_string(fold) + ".svg",
                          out_dir + "/curve_fold" + std::to_string(fold) + ".csv");
  }
  std::vector<std::pair<std::string, double>> mean_stops;
  for (const auto& row : summary)
    if (!row.not_applicable && row.censored < static_cast<int>(traces.size()))
      mean_stops.emplace_back(row.name, row.mean_annotations);
  render_average_curve(traces, mean_stops, out_dir + "/curve_avg.svg",
                       out_dir + "/curve_avg.csv");
  (void)opts;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  LoadedData data = load_input(spec);
  fs::create_directories(spec.out);

  FoldPlan plan = make_folds(data.n, spec.folds, derive_seed(spec.seed, "folds"));
  write_fold_manifest(spec.out + "/folds.csv", plan);

  ExperimentResult result;
  result.out_dir = spec.out;
  result.trace_paths.resize(spec.folds);

  std::vector<std::vector<std::string>> fold_warnings(spec.folds);
  std::vector<std::string> fold_errors(spec.folds);
  std::atomic<int> next_fold{0};
  std::mutex io_mutex;

  auto worker = [&]() {
    for (;;) {
      const int fold = next_fold.fetch_add(1);
      if (fold >= spec.folds) return;
      try {
        const Dataset* ds = &data.vectors;
        Dataset fold_ds;
        if (data.format == "classdirs") {
          fold_ds = fold_dataset(data, plan, fold, spec.min_count);
          ds = &fold_ds;
        }
        std::vector<int> pool = plan.pool_ids(fold);
        std::vector<int> test = plan.test_ids(fold);
        ALConfig cfg = al_config(spec, derive_seed(spec.seed, "fold" + std::to_string(fold)));
        RunResult run = run_active_learning(*ds, pool, test, cfg, spec.dump_predictions);
        {
          std::lock_guard<std::mutex> lock(io_mutex);
          write_fold_outputs(spec.out, fold, run);
          fold_warnings[fold] = std::move(run.warnings);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io_mutex);
        fold_errors[fold] = e.what();
      }
    }
  };

  const int thread_count = std::min(spec.jobs, spec.folds);
  std::vector<std::thread> threads;
  for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (int fold = 0; fold < spec.folds; ++fold) {
    if (!fold_errors[fold].empty())
      throw std::runtime_error("fold " + std::to_string(fold) + ": " + fold_errors[fold]);
    result.trace_paths[fold] = fold_trace_path(spec.out, fold);
    for (auto& w : fold_warnings[fold])
      result.warnings.push_back("fold " + std::to_string(fold) + ": " + w);
  }

  // Summaries always come from the files, not from in-memory state: the
  // trace CSV is the interface.
  std::vector<RunTrace> traces;
  traces.reserve(spec.folds);
  for (int fold = 0; fold < spec.folds; ++fold)
    traces.push_back(read_trace_csv(result.trace_paths[fold]));

  SummaryOptions opts = summary_options(spec);
  result.summary = summarize(traces, opts);
  for (const auto& row : result.summary)
    if (row.censored > 0)
      result.warnings.push_back("criterion " + row.name + ": " + std::to_string(row.censored) +
                                " fold(s) censored by the iteration cap; excluded from means");

  write_summary_csv(spec.out + "/summary.csv", result.summary);
  {
    std::ofstream txt(spec.out + "/summary.txt");
    txt << render_summary_table(result.summary);
    for (const auto& w : result.warnings) txt << "warning: " << w << '\n';
  }
  write_plots(spec.out, traces, result.summary, opts);

  json manifest;
  manifest["schema"] = "alstop-run-1";
  manifest["spec"] = json::parse(spec_to_json(spec));
  manifest["dataset_digest"] = file_digest_tree(spec.dataset);
  json seeds;
  seeds["folds"] = derive_seed(spec.seed, "folds");
  for (int fold = 0; fold < spec.folds; ++fold)
    seeds["fold" + std::to_string(fold)] = derive_seed(spec.seed, "fold" + std::to_string(fold));
  manifest["derived_seeds"] = seeds;
  json trace_digests;
  for (int fold = 0; fold < spec.folds; ++fold)
    trace_digests["trace_fold" + std::to_string(fold) + ".csv"] =
        file_digest(result.trace_paths[fold]);
  manifest["trace_digests"] = trace_digests;
  manifest["warnings"] = result.warnings;
  std::ofstream mf(spec.out + "/manifest.json");
  mf << manifest.dump(2) << '\n';

  return result;
}

std::vector<SweepRow> sweep_experiment(const ExperimentSpec& spec) {
  if (spec.sweep != "intensity" && spec.sweep != "longevity" && spec.sweep != "stop-set-size")
    throw std::invalid_argument("sweep axis must be intensity, longevity, or stop-set-size");
  if (spec.sweep_values.empty()) throw std::invalid_argument("sweep needs at least one value");
  for (double v : spec.sweep_values) {
    if (spec.sweep == "intensity" && !(v > 0.0 && v <= 1.0))
      throw std::invalid_argument("intensity cutoffs must lie in (0, 1]");
    if (spec.sweep != "intensity" && (v < 1.0 || v != static_cast<double>(static_cast<int>(v))))
      throw std::invalid_argument(spec.sweep + " values must be positive integers");
  }

  std::vector<SweepRow> rows;
  if (spec.sweep == "stop-set-size") {
    // The stop set itself changes, so each size is a fresh experiment.
    for (double v : spec.sweep_values) {
      ExperimentSpec sub = spec;
      sub.sweep.clear();
      sub.sweep_values.clear();
      sub.stop_set_size = static_cast<int>(v);
      sub.out = spec.out + "/size_" + std::to_string(static_cast<int>(v));
      ExperimentResult res = run_experiment(sub);
      SweepRow row;
      row.value = v;
      for (const auto& summary : res.summary)
        if (summary.name == "sp") {
          row.mean_annotations = summary.mean_annotations;
          row.mean_f = summary.mean_f;
          row.censored = summary.censored;
        }
      rows.push_back(row);
    }
  } else {
    // Agreement values in the trace do not depend on the cutoff or window,
    // so both axes replay the stored kappa column without retraining.
    ExperimentSpec base = spec;
    base.sweep.clear();
    base.sweep_values.clear();
    base.out = spec.out + "/base";
    ExperimentResult base_res = run_experiment(base);
    std::vector<RunTrace> traces;
    for (const auto& path : base_res.trace_paths) traces.push_back(read_trace_csv(path));

    for (double v : spec.sweep_values) {
      SummaryOptions opts = summary_options(base);
      if (spec.sweep == "intensity") {
        opts.sp.intensity_cutoff = v;
      } else {
        opts.sp.longevity_window = static_cast<int>(v);
      }
      SweepRow row;
      row.value = v;
      double ann = 0.0, f = 0.0;
      int used = 0;
      for (std::size_t fold = 0; fold < traces.size(); ++fold) {
        FoldStop fs = stop_point("sp", traces[fold], opts, static_cast<int>(fold));
        if (fs.censored) {
          ++row.censored;
          continue;
        }
        ann += static_cast<double>(fs.annotations);
        f += fs.f;
        ++used;
      }
      if (used > 0) {
        row.mean_annotations = ann / used;
        row.mean_f = f / used;
      }
      rows.push_back(row);
    }
  }

  fs::create_directories(spec.out);
  std::ofstream csv(spec.out + "/sweep.csv");
  csv << "axis,value,mean_annotations,mean_f,censored_folds\n";
  for (const auto& row : rows)
    csv << spec.sweep << ',' << format_double(row.value) << ','
        << format_double(row.mean_annotations) << ',' << format_double(row.mean_f) << ','
        << row.censored << '\n';
  std::ofstream txt(spec.out + "/sweep.txt");
  txt << "axis: " << spec.sweep << '\n';
  char buf[96];
  txt << "value     mean_annotations   mean_F\n";
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-9g %16.1f   %6.2f\n", row.value, row.mean_annotations,
                  row.mean_f * 100.0);
    txt << buf;
  }
  return rows;
}

ReplayReport replay_experiment(const std::string& manifest_path, const std::string& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open " + manifest_path);
  json manifest = json::parse(in);
  ExperimentSpec spec = spec_from_json(manifest.at("spec").dump());
  spec.out = out_dir;

  ReplayReport report;
  const std::string recorded_dataset = manifest.at("dataset_digest").get<std::string>();
  const std::string current_dataset = file_digest_tree(spec.dataset);
  if (recorded_dataset != current_dataset) {
    report.message = "dataset content changed since the recorded run (digest " +
                     current_dataset + " != " + recorded_dataset + ")";
    return report;
  }

  run_experiment(spec);

  std::ostringstream msg;
  report.ok = true;
  for (const auto& [name, digest] : manifest.at("trace_digests").items()) {
    const std::string fresh = file_digest(out_dir + "/" + name);
    if (fresh != digest.get<std::string>()) {
      report.ok = false;
      msg << name << ": digest mismatch (" << fresh << " != " << digest.get<std::string>()
          << ")\n";
    }
  }
  msg << (report.ok ? "replay reproduced every trace byte-for-byte" : "replay diverged");
  report.message = msg.str();
  return report;
}

std::vector<CriterionSummary> report_experiment(const std::string& run_dir) {
  std::ifstream in(run_dir + "/manifest.json");
  if (!in) throw std::runtime_error("cannot open " + run_dir + "/manifest.json");
  json manifest = json::parse(in);
  ExperimentSpec spec = spec_from_json(manifest.at("spec").dump());

  std::vector<RunTrace> traces;
  for (int fold = 0; fold < spec.folds; ++fold)
    traces.push_back(read_trace_csv(fold_trace_path(run_dir, fold)));
  SummaryOptions opts = summary_options(spec);
  std::vector<CriterionSummary> summary = summarize(traces, opts);
  write_summary_csv(run_dir + "/summary.csv", summary);
  std::ofstream txt(run_dir + "/summary.txt");
  txt << render_summary_table(summary);
  write_plots(run_dir, traces, summary, opts);
  return summary;
}

}  // namespace alstop
