#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "alstop/model.hpp"

namespace alstop {

// Both solvers are deterministic given the seed: identical inputs yield
// bit-identical weights, which the replay machinery relies on.
struct TrainConfig {
  LearnerKind kind = LearnerKind::svm;
  double cost = 1.0;        // svm hinge weight C
  double lambda = 1e-4;     // maxent L2 strength
  double tolerance = 1e-6;  // relative duality gap (svm) / gradient norm (maxent)
  int max_iterations = 0;   // 0 = per-kind default (svm 100000 epochs, maxent 500)
  std::uint64_t seed = 0;
};

struct TrainFailure : std::runtime_error {
  TrainFailure(const std::string& what, double best_tolerance, int iterations)
      : std::runtime_error(what), best_tolerance(best_tolerance), iterations(iterations) {}
  double best_tolerance;
  int iterations;
};

// Trains on the given examples (all must carry gold labels). Preconditions:
// at least one example; maxent additionally needs both classes present.
// A single-class svm degrades to a constant classifier (zero weights, huge
// bias of the lone label's sign) rather than failing, so callers that
// cannot re-sample still get the prediction the tie rule implies.
TrainedModel train(std::span<const SparseExample* const> examples, int dim,
                   const TrainConfig& config);
TrainedModel train(const Dataset& data, std::span<const int> ids, const TrainConfig& config);

// L1-loss C-SVM primal with the bias as a regularized constant feature:
//   0.5*(|w|^2 + b^2) + C * sum_i max(0, 1 - y_i*(w.x_i + b))
double svm_primal_objective(std::span<const SparseExample* const> examples,
                            std::span<const double> weights, double bias, double cost);

// Mean-loss logistic objective with unregularized bias:
//   (lambda/2)*|w|^2 + (1/n) * sum_i log(1 + exp(-y_i*(w.x_i + b)))
double maxent_objective(std::span<const SparseExample* const> examples,
                        std::span<const double> weights, double bias, double lambda);

// Analytic gradient of maxent_objective; grad has dim+1 entries, the last
// being the bias derivative.
void maxent_gradient(std::span<const SparseExample* const> examples,
                     std::span<const double> weights, double bias, double lambda,
                     std::span<double> grad);

}  // namespace alstop
