#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "alstop/data.hpp"

namespace alstop {

enum class LearnerKind { svm, maxent };

std::string learner_name(LearnerKind kind);
LearnerKind learner_from_name(const std::string& name);

struct TrainerMeta {
  double achieved_tolerance = 0.0;
  int iterations = 0;
};

// Linear decision function w.x + b shared by both learners. Prediction is
// the sign of the score with ties (score exactly 0) going to +1.
struct TrainedModel {
  LearnerKind kind = LearnerKind::svm;
  std::vector<double> weights;
  double bias = 0.0;
  TrainerMeta meta;

  double score(const SparseExample& ex) const;
  int predict(const SparseExample& ex) const { return score(ex) < 0.0 ? -1 : 1; }

  // Positive-class probability; defined for maxent only.
  double probability(const SparseExample& ex) const;

  // Distance-flavored uncertainty, smaller = less certain: |score| for svm,
  // |p - 0.5| for maxent.
  double uncertainty(const SparseExample& ex) const;

  // Uncertainty complement used for confidence aggregates: |score| for svm,
  // max(p, 1-p) for maxent.
  double confidence(const SparseExample& ex) const;

  // Strict margin test |score| < 1; svm only (a probabilistic model has no
  // geometric margin).
  bool inside_margin(const SparseExample& ex) const;
};

void dump_model(std::ostream& out, const TrainedModel& model);

}  // namespace alstop
