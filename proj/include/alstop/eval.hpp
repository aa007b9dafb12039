#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alstop/model.hpp"
#include "alstop/trace.hpp"

namespace alstop {

struct ConfusionCounts {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

ConfusionCounts count_confusion(const TrainedModel& model, const Dataset& data,
                                std::span<const int> test_ids);

// F1 on the positive class. Precision and recall each fall back to 0 when
// their denominator is 0, and F is 0 when P+R is. Returned as a fraction;
// tables multiply by 100 for display.
double f_measure(const ConfusionCounts& c);

// Two-sided matched-pairs t-test at fixed 95% confidence. Identical samples
// give t=0 / not significant; zero-variance nonzero-mean differences are
// significant with t at infinity of the mean's sign.
struct TTest {
  double t = 0.0;
  int df = 0;
  bool significant = false;
};

TTest matched_pairs_ttest(std::span<const double> a, std::span<const double> b,
                          double confidence = 0.95);

// Critical |t| for a two-sided 95% test; exact table for df 1..200, normal
// limit beyond.
double t_critical_95(int df);

// Where a criterion stops within one recorded run. Criteria that never fire
// stop at the final iteration when the pool ran out ("pool-exhausted"), and
// are censored when the run was cut by an iteration cap.
struct FoldStop {
  int fold = 0;
  std::optional<int> iteration;
  long annotations = 0;
  double f = 0.0;
  std::string reason;
  bool censored = false;
};

struct CriterionSummary {
  std::string name;
  std::vector<FoldStop> folds;
  double mean_annotations = 0.0;  // over uncensored folds
  double mean_f = 0.0;
  int censored = 0;
  bool not_applicable = false;  // sc2000 under maxent
  // Matched-pairs significance against the sp row over folds where both are
  // uncensored.
  TTest annotations_vs_sp;
  TTest f_vs_sp;
};

struct SummaryOptions {
  std::vector<std::string> criteria;  // rows to produce, "all" row appended
  LearnerKind learner = LearnerKind::svm;
  SPConfig sp;
  CriteriaParams params;
};

// Replays one criterion over a recorded trace, using only trace columns.
// The engine records its live decisions through the same decision
// functions, so recorded flags and replay agree; tests assert this.
std::optional<int> replay_first_stop(const std::string& criterion, const RunTrace& trace,
                                     const SummaryOptions& options);

FoldStop stop_point(const std::string& criterion, const RunTrace& trace,
                    const SummaryOptions& options, int fold);

// Builds the per-criterion comparison (one row per criterion plus a final
// "all" row for exhausting the pool) from re-read traces.
std::vector<CriterionSummary> summarize(const std::vector<RunTrace>& traces,
                                        const SummaryOptions& options);

void write_summary_csv(const std::string& path, const std::vector<CriterionSummary>& rows);
std::string render_summary_table(const std::vector<CriterionSummary>& rows);

}  // namespace alstop
