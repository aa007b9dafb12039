#include "alstop/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace alstop {

std::string learner_name(LearnerKind kind) {
  return kind == LearnerKind::svm ? "svm" : "maxent";
}

LearnerKind learner_from_name(const std::string& name) {
  if (name == "svm") return LearnerKind::svm;
  if (name == "maxent") return LearnerKind::maxent;
  throw std::invalid_argument("unknown learner '" + name + "' (expected svm or maxent)");
}

double TrainedModel::score(const SparseExample& ex) const {
  double s = bias;
  const int dim = static_cast<int>(weights.size());
  for (const auto& f : ex.features)
    if (f.index < dim) s += weights[f.index] * f.value;
  return s;
}

double TrainedModel::probability(const SparseExample& ex) const {
  if (kind != LearnerKind::maxent)
    throw std::logic_error("probability is defined for maxent models only");
  double s = score(ex);
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  double e = std::exp(s);
  return e / (1.0 + e);
}

double TrainedModel::uncertainty(const SparseExample& ex) const {
  if (kind == LearnerKind::svm) return std::fabs(score(ex));
  return std::fabs(probability(ex) - 0.5);
}

double TrainedModel::confidence(const SparseExample& ex) const {
  if (kind == LearnerKind::svm) return std::fabs(score(ex));
  double p = probability(ex);
  return p >= 0.5 ? p : 1.0 - p;
}

bool TrainedModel::inside_margin(const SparseExample& ex) const {
  if (kind != LearnerKind::svm)
    throw std::invalid_argument("margin test is defined for svm models only");
  return std::fabs(score(ex)) < 1.0;
}

void dump_model(std::ostream& out, const TrainedModel& model) {
  char buf[64];
  out << "learner " << learner_name(model.kind) << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", model.bias);
  out << "bias " << buf << '\n';
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] == 0.0) continue;
    std::snprintf(buf, sizeof(buf), "%.17g", model.weights[i]);
    out << 'w' << ' ' << i << ' ' << buf << '\n';
  }
}

}  // namespace alstop
