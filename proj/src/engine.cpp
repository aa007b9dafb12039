#include "alstop/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "alstop/agreement.hpp"
#include "alstop/eval.hpp"
#include "alstop/rng.hpp"

namespace alstop {

std::vector<int> select_batch(const TrainedModel& model, const Dataset& data,
                              std::span<const int> unlabeled_ids, int batch_size) {
  if (unlabeled_ids.empty()) throw std::invalid_argument("cannot select from an empty pool");
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(unlabeled_ids.size());
  for (int id : unlabeled_ids) keyed.emplace_back(model.uncertainty(data.examples[id]), id);
  const std::size_t take = std::min<std::size_t>(batch_size, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + take, keyed.end());
  std::vector<int> batch(take);
  for (std::size_t i = 0; i < take; ++i) batch[i] = keyed[i].second;
  return batch;
}

std::vector<int> draw_stop_set(std::span<const int> pool_ids, int size, std::uint64_t seed,
                               bool* clamped) {
  if (size < 1) throw std::invalid_argument("stop set size must be at least 1");
  if (clamped) *clamped = static_cast<std::size_t>(size) > pool_ids.size();
  Rng rng(seed);
  return sample_without_replacement(std::vector<int>(pool_ids.begin(), pool_ids.end()),
                                    static_cast<std::size_t>(size), rng);
}

namespace {

struct PoolScan {
  std::vector<int> predictions;  // aligned with the id list scanned
  double mean_confidence = 0.0;
  int inside_margin = 0;
};

PoolScan scan_pool(const TrainedModel& model, const Dataset& data, std::span<const int> ids) {
  PoolScan out;
  out.predictions.reserve(ids.size());
  const bool svm = model.kind == LearnerKind::svm;
  double conf_sum = 0.0;
  for (int id : ids) {
    const auto& ex = data.examples[id];
    const double s = model.score(ex);
    out.predictions.push_back(s < 0.0 ? -1 : 1);
    if (svm) {
      const double mag = std::fabs(s);
      conf_sum += mag;
      if (mag < 1.0) ++out.inside_margin;
    } else {
      const double p = model.probability(ex);
      conf_sum += p >= 0.5 ? p : 1.0 - p;
    }
  }
  out.mean_confidence = ids.empty() ? 0.0 : conf_sum / static_cast<double>(ids.size());
  return out;
}

std::vector<int> predict_ids(const TrainedModel& model, const Dataset& data,
                             std::span<const int> ids) {
  std::vector<int> preds;
  preds.reserve(ids.size());
  for (int id : ids) preds.push_back(model.predict(data.examples[id]));
  return preds;
}

}  // namespace

RunResult run_active_learning(const Dataset& data, std::span<const int> pool_ids,
                              std::span<const int> test_ids, const ALConfig& config,
                              bool keep_predictions) {
  const long total = static_cast<long>(pool_ids.size()) + static_cast<long>(test_ids.size());
  const bool small = total < 50000;
  const int batch_size = config.batch_size > 0 ? config.batch_size : (small ? 20 : 200);
  const int seed_size = config.seed_size > 0 ? config.seed_size : (small ? 100 : 1000);

  if (test_ids.empty()) throw std::invalid_argument("test split is empty");
  if (static_cast<int>(pool_ids.size()) <= seed_size)
    throw std::invalid_argument("pool must be larger than the seed set");
  for (int id : pool_ids)
    if (!data.examples[id].has_gold())
      throw std::invalid_argument("pool example " + std::to_string(id) + " lacks a gold label");

  RunResult result;

  bool clamped = false;
  result.stop_set_ids =
      draw_stop_set(pool_ids, config.sp.stop_set_size, derive_seed(config.run_seed, "stopset"),
                    &clamped);
  if (clamped)
    result.warnings.push_back("stop set clamped to pool size " +
                              std::to_string(result.stop_set_ids.size()));

  // Seed draw; redraw when single-class so the first model is meaningful.
  Rng seed_rng(derive_seed(config.run_seed, "seed"));
  std::vector<int> pool_copy(pool_ids.begin(), pool_ids.end());
  for (int attempt = 0; attempt < 10; ++attempt) {
    result.seed_ids = sample_without_replacement(pool_copy, seed_size, seed_rng);
    bool has_pos = false, has_neg = false;
    for (int id : result.seed_ids)
      (data.examples[id].label > 0 ? has_pos : has_neg) = true;
    if (has_pos && has_neg) break;
    if (attempt == 9) {
      if (config.learner.kind == LearnerKind::maxent)
        throw std::runtime_error("seed set is single-class after 10 draws");
      result.warnings.push_back("seed set single-class after 10 draws; training degrades");
    }
  }

  std::vector<int> labeled(result.seed_ids.begin(), result.seed_ids.end());
  std::sort(labeled.begin(), labeled.end());
  std::vector<int> unlabeled;
  unlabeled.reserve(pool_ids.size());
  {
    std::vector<int> pool_sorted(pool_ids.begin(), pool_ids.end());
    std::sort(pool_sorted.begin(), pool_sorted.end());
    std::set_difference(pool_sorted.begin(), pool_sorted.end(), labeled.begin(), labeled.end(),
                        std::back_inserter(unlabeled));
  }

  TrainConfig learner = config.learner;
  learner.seed = derive_seed(config.run_seed, "train");
  // Training always sees the labeled ids in ascending order, so the model at
  // pool exhaustion is bit-identical to training on the whole pool directly.
  TrainedModel model = train(data, labeled, learner);

  AgreementWindow window(config.sp.longevity_window);
  ZwhState zwh{config.criteria.zwh_initial_threshold};
  std::vector<double> ls_history;        // one entry per queried instance
  std::vector<double> conf_history;      // aggregate pool confidence per model
  std::vector<int> prev_pool_preds_by_id(data.examples.size(), 0);

  PoolScan scan = scan_pool(model, data, unlabeled);
  for (std::size_t i = 0; i < unlabeled.size(); ++i)
    prev_pool_preds_by_id[unlabeled[i]] = scan.predictions[i];
  conf_history.push_back(scan.mean_confidence);

  std::vector<int> stopset_preds = predict_ids(model, data, result.stop_set_ids);
  if (keep_predictions) result.stopset_predictions.push_back(stopset_preds);

  const bool svm = config.learner.kind == LearnerKind::svm;
  auto make_row = [&](int iteration) {
    TraceRow row;
    row.iteration = iteration;
    row.labeled = static_cast<int>(labeled.size());
    row.pool_remaining = static_cast<int>(unlabeled.size());
    row.stopset_digest = predictions_digest(stopset_preds);
    row.pool_conf = scan.mean_confidence;
    if (svm) row.pool_inside_margin = scan.inside_margin;
    row.test_f = f_measure(count_confusion(model, data, test_ids));
    return row;
  };

  auto record_criteria = [&](TraceRow& row, int iteration,
                             const std::optional<double>& batch_acc,
                             const std::optional<int>& changes) {
    StopDecision sp = sp_decide(window, config.sp, iteration);
    StopDecision sc = sc2000_decide_counts(svm, scan.inside_margin,
                                           static_cast<int>(unlabeled.size()), iteration);
    StopDecision zwh_d, minerr_d;
    if (batch_acc) {
      zwh_d = zwh2008_decide(zwh, *batch_acc, changes.value_or(0), iteration,
                             config.criteria.zwh_raise_step);
      minerr_d = minerr_decide(*batch_acc, config.criteria.minerr_threshold, iteration);
    } else {
      zwh_d.criterion = "zwh2008";
      zwh_d.reason = "no batch yet";
      minerr_d.criterion = "minerr";
      minerr_d.reason = "no batch yet";
    }
    StopDecision ls = ls2008_decide(ls_history, config.criteria.ls_window,
                                    config.criteria.ls_slope_threshold, iteration);
    StopDecision v = v2008_decide(conf_history, iteration);
    const StopDecision* all[kCriterionCount] = {&sp, &sc, &zwh_d, &minerr_d, &ls, &v};
    for (int c = 0; c < kCriterionCount; ++c) {
      row.criteria[c].stop = all[c]->stop;
      if (all[c]->has_diagnostic) row.criteria[c].diagnostic = all[c]->diagnostic;
    }
  };

  {
    TraceRow row = make_row(0);
    record_criteria(row, 0, std::nullopt, std::nullopt);
    result.trace.rows.push_back(std::move(row));
  }

  long queried_cum = 0;
  for (long iteration = 1; !unlabeled.empty(); ++iteration) {
    if (config.max_iterations >= 0 && iteration > config.max_iterations) break;

    std::vector<int> batch = select_batch(model, data, unlabeled, batch_size);
    double batch_conf_sum = 0.0;
    for (int id : batch) batch_conf_sum += model.confidence(data.examples[id]);
    const double batch_conf = batch_conf_sum / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) ls_history.push_back(batch_conf);
    queried_cum += static_cast<long>(batch.size());

    // Reveal labels: move the batch from unlabeled to labeled.
    std::vector<int> batch_sorted = batch;
    std::sort(batch_sorted.begin(), batch_sorted.end());
    {
      std::vector<int> merged;
      merged.reserve(labeled.size() + batch_sorted.size());
      std::merge(labeled.begin(), labeled.end(), batch_sorted.begin(), batch_sorted.end(),
                 std::back_inserter(merged));
      labeled = std::move(merged);
      std::vector<int> rest;
      rest.reserve(unlabeled.size());
      std::set_difference(unlabeled.begin(), unlabeled.end(), batch_sorted.begin(),
                          batch_sorted.end(), std::back_inserter(rest));
      unlabeled = std::move(rest);
    }

    TrainedModel next = train(data, labeled, learner);

    std::vector<int> next_stopset_preds = predict_ids(next, data, result.stop_set_ids);
    AgreementValue agreement = kappa_agreement(stopset_preds, next_stopset_preds);
    window.push(agreement.kappa);

    int batch_correct = 0;
    for (int id : batch)
      if (next.predict(data.examples[id]) == data.examples[id].label) ++batch_correct;
    const double batch_acc = static_cast<double>(batch_correct) / static_cast<double>(batch.size());

    scan = scan_pool(next, data, unlabeled);
    int changes = 0;
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      if (scan.predictions[i] != prev_pool_preds_by_id[unlabeled[i]]) ++changes;
      prev_pool_preds_by_id[unlabeled[i]] = scan.predictions[i];
    }
    conf_history.push_back(scan.mean_confidence);

    model = std::move(next);
    stopset_preds = std::move(next_stopset_preds);
    if (keep_predictions) result.stopset_predictions.push_back(stopset_preds);

    TraceRow row = make_row(static_cast<int>(iteration));
    row.queried_cum = queried_cum;
    row.batch_ids = batch;  // selection order, most uncertain first
    row.kappa = agreement.kappa;
    row.kappa_degenerate = agreement.degenerate;
    row.batch_acc = batch_acc;
    row.batch_conf = batch_conf;
    row.pool_changes = changes;
    record_criteria(row, static_cast<int>(iteration), batch_acc, changes);
    result.trace.rows.push_back(std::move(row));
  }

  return result;
}

}  // namespace alstop
