#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alstop/data.hpp"
#include "alstop/stopping.hpp"
#include "alstop/trace.hpp"
#include "alstop/train.hpp"

namespace alstop {

// One fold's simulation parameters. batch_size/seed_size of 0 resolve by
// dataset size: 20/100 under 50,000 total examples, 200/1000 otherwise.
struct ALConfig {
  int batch_size = 0;
  int seed_size = 0;
  TrainConfig learner;
  SPConfig sp;
  CriteriaParams criteria;
  long max_iterations = -1;  // -1 = run until the pool is exhausted
  std::uint64_t run_seed = 0;
};

struct RunResult {
  RunTrace trace;
  std::vector<std::string> warnings;
  std::vector<int> stop_set_ids;  // draw order, frozen for the whole run
  std::vector<int> seed_ids;
  // Per-model stop-set predictions (model index -> +1/-1 per stop-set
  // member), populated only when keep_predictions is set in the call.
  std::vector<std::vector<int>> stopset_predictions;
};

// Smallest-uncertainty batch under the model, ties broken by ascending id;
// returns fewer than batch_size ids only when the pool is nearly empty.
std::vector<int> select_batch(const TrainedModel& model, const Dataset& data,
                              std::span<const int> unlabeled_ids, int batch_size);

// Uniform draw without replacement from the pool; a request larger than the
// pool is clamped (reported through *clamped). Stop-set members stay
// queryable and stay in the stop set after being queried.
std::vector<int> draw_stop_set(std::span<const int> pool_ids, int size, std::uint64_t seed,
                               bool* clamped = nullptr);

// Runs pool-based uncertainty sampling on one fold, recording one TraceRow
// per model. Stopping criteria observe every iteration but never halt the
// loop; the run ends on pool exhaustion or the max_iterations cap.
// Sub-seeds: stopset/seed/train streams derive from config.run_seed, so the
// stop-set draw is independent of the seed draw and of batch selection.
RunResult run_active_learning(const Dataset& data, std::span<const int> pool_ids,
                              std::span<const int> test_ids, const ALConfig& config,
                              bool keep_predictions = false);

}  // namespace alstop
