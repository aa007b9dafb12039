#include "alstop/stopping.hpp"

#include <algorithm>
#include <stdexcept>

namespace alstop {

AgreementWindow::AgreementWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("window capacity must be at least 1");
}

void AgreementWindow::push(double kappa) {
  values_.push_back(kappa);
  if (static_cast<int>(values_.size()) > capacity_) values_.pop_front();
}

double AgreementWindow::mean() const {
  if (values_.empty()) throw std::logic_error("mean of an empty window");
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

StopDecision sp_decide(const AgreementWindow& window, const SPConfig& config, int iteration) {
  StopDecision d;
  d.criterion = "sp";
  d.iteration = iteration;
  if (!window.full()) {
    d.reason = "window not full (" + std::to_string(window.size()) + "/" +
               std::to_string(window.capacity()) + ")";
    if (window.size() > 0) {
      d.diagnostic = window.mean();
      d.has_diagnostic = true;
    }
    return d;
  }
  d.diagnostic = window.mean();
  d.has_diagnostic = true;
  if (d.diagnostic >= config.intensity_cutoff) {
    d.stop = true;
    d.reason = "windowed agreement reached cutoff";
  } else {
    d.reason = "windowed agreement below cutoff";
  }
  return d;
}

StopDecision sc2000_decide_counts(bool svm_model, int inside_margin_count, int remaining_count,
                                  int iteration) {
  StopDecision d;
  d.criterion = "sc2000";
  d.iteration = iteration;
  if (!svm_model) {
    d.reason = "not-applicable";
    return d;
  }
  d.diagnostic = inside_margin_count;
  d.has_diagnostic = true;
  if (remaining_count == 0) {
    d.stop = true;
    d.reason = "pool empty";
  } else if (inside_margin_count == 0) {
    d.stop = true;
    d.reason = "margin exhausted";
  } else {
    d.reason = "examples remain inside margin";
  }
  return d;
}

StopDecision sc2000_decide(const TrainedModel& model, const Dataset& data,
                           std::span<const int> remaining_ids, int iteration) {
  if (model.kind != LearnerKind::svm)
    return sc2000_decide_counts(false, 0, static_cast<int>(remaining_ids.size()), iteration);
  int inside = 0;
  for (int id : remaining_ids)
    if (model.inside_margin(data.examples[id])) ++inside;
  return sc2000_decide_counts(true, inside, static_cast<int>(remaining_ids.size()), iteration);
}

StopDecision zwh2008_decide(ZwhState& state, double batch_accuracy, int prediction_changes,
                            int iteration, double raise_step) {
  StopDecision d;
  d.criterion = "zwh2008";
  d.iteration = iteration;
  d.diagnostic = state.threshold;
  d.has_diagnostic = true;
  if (batch_accuracy >= state.threshold) {
    if (prediction_changes == 0) {
      d.stop = true;
      d.reason = "accuracy met with stable predictions";
    } else {
      state.threshold = std::min(1.0, state.threshold + raise_step);
      d.diagnostic = state.threshold;
      d.reason = "accuracy met but predictions changed; threshold raised";
    }
  } else {
    d.reason = "batch accuracy below threshold";
  }
  return d;
}

StopDecision minerr_decide(double batch_accuracy, double threshold, int iteration) {
  StopDecision d;
  d.criterion = "minerr";
  d.iteration = iteration;
  d.diagnostic = batch_accuracy;
  d.has_diagnostic = true;
  if (batch_accuracy >= threshold) {
    d.stop = true;
    d.reason = "batch accuracy met threshold";
  } else {
    d.reason = "batch accuracy below threshold";
  }
  return d;
}

double least_squares_slope(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("slope needs at least two points");
  const double x_mean = static_cast<double>(n - 1) / 2.0;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    num += dx * (y[i] - y_mean);
    den += dx * dx;
  }
  return num / den;
}

StopDecision ls2008_decide(std::span<const double> instance_history, int window,
                           double slope_threshold, int iteration) {
  StopDecision d;
  d.criterion = "ls2008";
  d.iteration = iteration;
  if (static_cast<int>(instance_history.size()) < window) {
    d.reason = "history shorter than window (" + std::to_string(instance_history.size()) + "/" +
               std::to_string(window) + ")";
    return d;
  }
  const double slope = least_squares_slope(instance_history.subspan(instance_history.size() - window));
  d.diagnostic = slope;
  d.has_diagnostic = true;
  if (slope < slope_threshold) {
    d.stop = true;
    d.reason = "confidence slope flattened";
  } else {
    d.reason = "confidence still rising";
  }
  return d;
}

StopDecision v2008_decide(std::span<const double> aggregate_history, int iteration) {
  StopDecision d;
  d.criterion = "v2008";
  d.iteration = iteration;
  const std::size_t n = aggregate_history.size();
  if (n >= 1) {
    d.diagnostic = aggregate_history.back();
    d.has_diagnostic = true;
  }
  if (n < 4) {
    d.reason = "fewer than four confidence values";
    return d;
  }
  const bool three_drops = aggregate_history[n - 1] < aggregate_history[n - 2] &&
                           aggregate_history[n - 2] < aggregate_history[n - 3] &&
                           aggregate_history[n - 3] < aggregate_history[n - 4];
  if (three_drops) {
    d.stop = true;
    d.reason = "three consecutive confidence drops";
  } else {
    d.reason = "no three-drop run";
  }
  return d;
}

std::optional<int> sp_first_stop(std::span<const double> kappas, const SPConfig& config) {
  AgreementWindow window(config.longevity_window);
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    window.push(kappas[i]);
    const int iteration = static_cast<int>(i) + 1;
    if (sp_decide(window, config, iteration).stop) return iteration;
  }
  return std::nullopt;
}

int criterion_index(const std::string& name) {
  for (int i = 0; i < kCriterionCount; ++i)
    if (name == kCriterionNames[i]) return i;
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

}  // namespace alstop
