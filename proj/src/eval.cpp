#include "alstop/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace alstop {

ConfusionCounts count_confusion(const TrainedModel& model, const Dataset& data,
                                std::span<const int> test_ids) {
  ConfusionCounts c;
  for (int id : test_ids) {
    const auto& ex = data.examples[id];
    if (!ex.has_gold()) throw std::invalid_argument("test example lacks a gold label");
    const int pred = model.predict(ex);
    if (ex.label == 1) {
      (pred == 1 ? c.tp : c.fn) += 1;
    } else {
      (pred == 1 ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

double f_measure(const ConfusionCounts& c) {
  const double p = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
  const double r = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

// Two-sided 95% critical values of Student's t for df 1..200.
constexpr double kTCritical95[200] = {
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582,
    2.446912, 2.364624, 2.306004, 2.262157, 2.228139,
    2.200985, 2.178813, 2.160369, 2.144787, 2.131450,
    2.119905, 2.109816, 2.100922, 2.093024, 2.085963,
    2.079614, 2.073873, 2.068658, 2.063899, 2.059539,
    2.055529, 2.051831, 2.048407, 2.045230, 2.042272,
    2.039513, 2.036933, 2.034515, 2.032245, 2.030108,
    2.028094, 2.026192, 2.024394, 2.022691, 2.021075,
    2.019541, 2.018082, 2.016692, 2.015368, 2.014103,
    2.012896, 2.011741, 2.010635, 2.009575, 2.008559,
    2.007584, 2.006647, 2.005746, 2.004879, 2.004045,
    2.003241, 2.002465, 2.001717, 2.000995, 2.000298,
    1.999624, 1.998972, 1.998341, 1.997730, 1.997138,
    1.996564, 1.996008, 1.995469, 1.994945, 1.994437,
    1.993943, 1.993464, 1.992997, 1.992543, 1.992102,
    1.991673, 1.991254, 1.990847, 1.990450, 1.990063,
    1.989686, 1.989319, 1.988960, 1.988610, 1.988268,
    1.987934, 1.987608, 1.987290, 1.986979, 1.986675,
    1.986377, 1.986086, 1.985802, 1.985523, 1.985251,
    1.984984, 1.984723, 1.984467, 1.984217, 1.983972,
    1.983731, 1.983495, 1.983264, 1.983038, 1.982815,
    1.982597, 1.982383, 1.982173, 1.981967, 1.981765,
    1.981567, 1.981372, 1.981180, 1.980992, 1.980808,
    1.980626, 1.980448, 1.980272, 1.980100, 1.979930,
    1.979764, 1.979600, 1.979439, 1.979280, 1.979124,
    1.978971, 1.978820, 1.978671, 1.978524, 1.978380,
    1.978239, 1.978099, 1.977961, 1.977826, 1.977692,
    1.977561, 1.977431, 1.977304, 1.977178, 1.977054,
    1.976931, 1.976811, 1.976692, 1.976575, 1.976460,
    1.976346, 1.976233, 1.976122, 1.976013, 1.975905,
    1.975799, 1.975694, 1.975590, 1.975488, 1.975387,
    1.975288, 1.975189, 1.975092, 1.974996, 1.974902,
    1.974808, 1.974716, 1.974625, 1.974535, 1.974446,
    1.974358, 1.974271, 1.974185, 1.974100, 1.974017,
    1.973934, 1.973852, 1.973771, 1.973691, 1.973612,
    1.973534, 1.973457, 1.973381, 1.973305, 1.973231,
    1.973157, 1.973084, 1.973012, 1.972941, 1.972870,
    1.972800, 1.972731, 1.972663, 1.972595, 1.972528,
    1.972462, 1.972396, 1.972332, 1.972268, 1.972204,
    1.972141, 1.972079, 1.972017, 1.971957, 1.971896,
};

}  // namespace

double t_critical_95(int df) {
  if (df < 1) throw std::invalid_argument("degrees of freedom must be at least 1");
  if (df <= 200) return kTCritical95[df - 1];
  return 1.959964;  // normal approximation
}

TTest matched_pairs_ttest(std::span<const double> a, std::span<const double> b,
                          double confidence) {
  if (confidence != 0.95)
    throw std::invalid_argument("only the 95% confidence level is supported");
  if (a.size() != b.size()) throw std::invalid_argument("samples differ in length");
  if (a.size() < 2) throw std::invalid_argument("need at least two pairs");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) all_zero = false;
    ss += (d - mean) * (d - mean);
  }
  TTest out;
  out.df = static_cast<int>(n) - 1;
  if (all_zero) return out;  // identical samples: t := 0, not significant
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    // Constant nonzero difference: the means differ as surely as n allows.
    out.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    out.significant = true;
    return out;
  }
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  out.significant = std::fabs(out.t) > t_critical_95(out.df);
  return out;
}

namespace {

// Column views used by the replay paths.
std::vector<double> kappa_column(const RunTrace& trace) {
  std::vector<double> out;
  for (const auto& r : trace.rows)
    if (r.kappa) out.push_back(*r.kappa);
  return out;
}

std::optional<int> replay_sc2000(const RunTrace& trace, bool svm) {
  if (!svm) return std::nullopt;
  for (const auto& r : trace.rows) {
    if (!r.pool_inside_margin) continue;
    if (*r.pool_inside_margin == 0 || r.pool_remaining == 0) return r.iteration;
  }
  return std::nullopt;
}

std::optional<int> replay_zwh(const RunTrace& trace, const CriteriaParams& p) {
  ZwhState state{p.zwh_initial_threshold};
  for (const auto& r : trace.rows) {
    if (!r.batch_acc) continue;
    if (zwh2008_decide(state, *r.batch_acc, r.pool_changes.value_or(0), r.iteration,
                       p.zwh_raise_step)
            .stop)
      return r.iteration;
  }
  return std::nullopt;
}

std::optional<int> replay_minerr(const RunTrace& trace, const CriteriaParams& p) {
  for (const auto& r : trace.rows)
    if (r.batch_acc && minerr_decide(*r.batch_acc, p.minerr_threshold, r.iteration).stop)
      return r.iteration;
  return std::nullopt;
}

std::optional<int> replay_ls(const RunTrace& trace, const CriteriaParams& p) {
  std::vector<double> history;
  for (const auto& r : trace.rows) {
    if (r.batch_conf)
      for (std::size_t i = 0; i < r.batch_ids.size(); ++i) history.push_back(*r.batch_conf);
    if (ls2008_decide(history, p.ls_window, p.ls_slope_threshold, r.iteration).stop)
      return r.iteration;
  }
  return std::nullopt;
}

std::optional<int> replay_v(const RunTrace& trace) {
  std::vector<double> history;
  for (const auto& r : trace.rows) {
    history.push_back(r.pool_conf);
    if (v2008_decide(history, r.iteration).stop) return r.iteration;
  }
  return std::nullopt;
}

const TraceRow& row_at_iteration(const RunTrace& trace, int iteration) {
  for (const auto& r : trace.rows)
    if (r.iteration == iteration) return r;
  throw std::logic_error("iteration " + std::to_string(iteration) + " not in trace");
}

}  // namespace

std::optional<int> replay_first_stop(const std::string& criterion, const RunTrace& trace,
                                     const SummaryOptions& options) {
  const bool svm = options.learner == LearnerKind::svm;
  if (criterion == "sp") {
    auto kappas = kappa_column(trace);
    return sp_first_stop(kappas, options.sp);
  }
  if (criterion == "sc2000") return replay_sc2000(trace, svm);
  if (criterion == "zwh2008") return replay_zwh(trace, options.params);
  if (criterion == "minerr") return replay_minerr(trace, options.params);
  if (criterion == "ls2008") return replay_ls(trace, options.params);
  if (criterion == "v2008") return replay_v(trace);
  if (criterion == "all")
    return trace.pool_exhausted() ? std::optional<int>(trace.rows.back().iteration)
                                  : std::nullopt;
  throw std::invalid_argument("unknown criterion '" + criterion + "'");
}

FoldStop stop_point(const std::string& criterion, const RunTrace& trace,
                    const SummaryOptions& options, int fold) {
  FoldStop out;
  out.fold = fold;
  if (trace.rows.empty()) throw std::invalid_argument("empty trace");
  const bool na = criterion == "sc2000" && options.learner == LearnerKind::maxent;
  std::optional<int> iter = replay_first_stop(criterion, trace, options);
  if (iter) {
    const TraceRow& row = row_at_iteration(trace, *iter);
    out.iteration = *iter;
    out.annotations = row.labeled;
    out.f = row.test_f;
    out.reason = criterion == "all" ? "pool-exhausted" : "fired";
    return out;
  }
  if (trace.pool_exhausted()) {
    const TraceRow& row = trace.rows.back();
    out.iteration = row.iteration;
    out.annotations = row.labeled;
    out.f = row.test_f;
    out.reason = na ? "not-applicable" : "pool-exhausted";
    return out;
  }
  out.censored = true;
  out.reason = na ? "not-applicable" : "censored";
  return out;
}

std::vector<CriterionSummary> summarize(const std::vector<RunTrace>& traces,
                                        const SummaryOptions& options) {
  if (traces.empty()) throw std::invalid_argument("no traces to summarize");
  std::vector<std::string> names = options.criteria;
  names.push_back("all");

  std::vector<CriterionSummary> rows;
  for (const auto& name : names) {
    CriterionSummary row;
    row.name = name;
    row.not_applicable = name == "sc2000" && options.learner == LearnerKind::maxent;
    double ann_sum = 0.0, f_sum = 0.0;
    int used = 0;
    for (int fold = 0; fold < static_cast<int>(traces.size()); ++fold) {
      FoldStop fs = stop_point(name, traces[fold], options, fold);
      if (fs.censored) {
        ++row.censored;
      } else {
        ann_sum += static_cast<double>(fs.annotations);
        f_sum += fs.f;
        ++used;
      }
      row.folds.push_back(std::move(fs));
    }
    if (used > 0) {
      row.mean_annotations = ann_sum / used;
      row.mean_f = f_sum / used;
    }
    rows.push_back(std::move(row));
  }

  // Significance vs the sp row over folds uncensored in both.
  const CriterionSummary* sp_row = nullptr;
  for (const auto& row : rows)
    if (row.name == "sp") sp_row = &row;
  if (sp_row) {
    for (auto& row : rows) {
      if (row.name == "sp") continue;
      std::vector<double> ann_a, ann_b, f_a, f_b;
      for (std::size_t i = 0; i < row.folds.size(); ++i) {
        if (row.folds[i].censored || sp_row->folds[i].censored) continue;
        ann_a.push_back(static_cast<double>(row.folds[i].annotations));
        ann_b.push_back(static_cast<double>(sp_row->folds[i].annotations));
        f_a.push_back(row.folds[i].f);
        f_b.push_back(sp_row->folds[i].f);
      }
      if (ann_a.size() >= 2) {
        row.annotations_vs_sp = matched_pairs_ttest(ann_a, ann_b);
        row.f_vs_sp = matched_pairs_ttest(f_a, f_b);
      }
    }
  }
  return rows;
}

void write_summary_csv(const std::string& path, const std::vector<CriterionSummary>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "criterion,fold,stop_iteration,annotations,f,reason\n";
  for (const auto& row : rows)
    for (const auto& fs : row.folds) {
      out << row.name << ',' << fs.fold << ',';
      if (fs.iteration) out << *fs.iteration;
      out << ',' << fs.annotations << ',' << format_double(fs.f) << ',' << fs.reason << '\n';
    }
  out << "criterion,mean_annotations,mean_f,censored_folds,sig_annotations_vs_sp,sig_f_vs_sp,"
         "not_applicable\n";
  for (const auto& row : rows) {
    out << row.name << ',' << format_double(row.mean_annotations) << ','
        << format_double(row.mean_f) << ',' << row.censored << ','
        << (row.annotations_vs_sp.significant ? 1 : 0) << ',' << (row.f_vs_sp.significant ? 1 : 0)
        << ',' << (row.not_applicable ? 1 : 0) << '\n';
  }
}

std::string render_summary_table(const std::vector<CriterionSummary>& rows) {
  std::ostringstream out;
  char buf[128];
  out << "criterion   mean_annotations   mean_F     censored  notes\n";
  for (const auto& row : rows) {
    std::string notes;
    if (row.not_applicable) notes = "n/a";
    if (row.name != "sp" && row.name != "all" && !row.not_applicable) {
      std::string sig;
      if (row.annotations_vs_sp.significant) sig += "annotations*";
      if (row.f_vs_sp.significant) sig += sig.empty() ? "F*" : " F*";
      if (!sig.empty()) notes = sig;
    }
    std::snprintf(buf, sizeof(buf), "%-11s %16.1f   %6.2f  %9d  %s\n", row.name.c_str(),
                  row.mean_annotations, row.mean_f * 100.0, row.censored, notes.c_str());
    out << buf;
  }
  out << "(* = differs from sp at 95% in a matched-pairs t-test; F shown as percent)\n";
  return out.str();
}

}  // namespace alstop
