#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alstop/model.hpp"

namespace alstop {

// Prediction-stability parameters: stop once the mean of the last
// `longevity_window` consecutive-model agreement values on a fixed stop set
// reaches `intensity_cutoff`.
struct SPConfig {
  double intensity_cutoff = 0.99;
  int longevity_window = 3;
  int stop_set_size = 2000;
};

// Thresholds of the observed rival criteria.
struct CriteriaParams {
  double zwh_initial_threshold = 0.9;
  double zwh_raise_step = 0.01;
  double minerr_threshold = 0.9;
  int ls_window = 100;
  double ls_slope_threshold = 0.00005;
};

struct StopDecision {
  bool stop = false;
  std::string criterion;
  int iteration = 0;
  std::string reason;
  double diagnostic = 0.0;
  bool has_diagnostic = false;
};

// Bounded window over the most recent agreement values; pushing beyond
// capacity evicts the oldest.
class AgreementWindow {
 public:
  explicit AgreementWindow(int capacity);
  void push(double kappa);
  bool full() const { return static_cast<int>(values_.size()) == capacity_; }
  int size() const { return static_cast<int>(values_.size()); }
  int capacity() const { return capacity_; }
  double mean() const;

 private:
  int capacity_;
  std::deque<double> values_;
};

StopDecision sp_decide(const AgreementWindow& window, const SPConfig& config, int iteration);

// Margin exhaustion: stop when no remaining unlabeled example lies strictly
// inside the unit margin (|score| < 1). Vacuously stops on an empty pool.
// Not applicable to maxent models.
StopDecision sc2000_decide_counts(bool svm_model, int inside_margin_count, int remaining_count,
                                  int iteration);
StopDecision sc2000_decide(const TrainedModel& model, const Dataset& data,
                           std::span<const int> remaining_ids, int iteration);

// Accuracy-plus-stability: stop when the newest model scores at least the
// current threshold on the batch it just consumed AND changes no prediction
// on the remaining pool; accuracy met with changes outstanding raises the
// threshold. The threshold never decreases and caps at 1.
struct ZwhState {
  double threshold = 0.9;
};
StopDecision zwh2008_decide(ZwhState& state, double batch_accuracy, int prediction_changes,
                            int iteration, double raise_step = 0.01);

// Accuracy-only variant used to demonstrate why the stability conjunct
// matters; fixed threshold, never raised.
StopDecision minerr_decide(double batch_accuracy, double threshold, int iteration);

// Confidence-gradient: per-queried-instance history of selection-time
// confidence; stop once the least-squares slope of the last `window`
// entries falls below `slope_threshold`. Needs a full window.
StopDecision ls2008_decide(std::span<const double> instance_history, int window,
                           double slope_threshold, int iteration);

// Overall-confidence drop: stop after three consecutive strict drops in the
// per-model aggregate confidence over the remaining pool (so at least four
// recorded values).
StopDecision v2008_decide(std::span<const double> aggregate_history, int iteration);

// Slope of the least-squares line through (0, y[0]) .. (n-1, y[n-1]).
double least_squares_slope(std::span<const double> y);

// Replay helper: first iteration at which the prediction-stability rule
// fires given the agreement sequence, where kappas[i] belongs to iteration
// i+1 (models i and i+1). Returns nullopt if it never fires.
std::optional<int> sp_first_stop(std::span<const double> kappas, const SPConfig& config);

inline constexpr const char* kCriterionNames[] = {"sp",     "sc2000", "zwh2008",
                                                  "minerr", "ls2008", "v2008"};
inline constexpr int kCriterionCount = 6;
int criterion_index(const std::string& name);

}  // namespace alstop
