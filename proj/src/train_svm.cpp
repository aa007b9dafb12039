#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "alstop/rng.hpp"
#include "alstop/train.hpp"

namespace alstop {

namespace {

// Dot product against the augmented weight vector (w, b); the constant
// bias feature has value 1 and lives at index dim.
double augmented_dot(const std::vector<double>& w, const SparseExample& ex, int dim) {
  double s = w[dim];
  for (const auto& f : ex.features) s += w[f.index] * f.value;
  return s;
}

void add_scaled(std::vector<double>& w, const SparseExample& ex, int dim, double factor) {
  for (const auto& f : ex.features) w[f.index] += factor * f.value;
  w[dim] += factor;
}

}  // namespace

double svm_primal_objective(std::span<const SparseExample* const> examples,
                            std::span<const double> weights, double bias, double cost) {
  double reg = bias * bias;
  for (double v : weights) reg += v * v;
  double hinge = 0.0;
  const int dim = static_cast<int>(weights.size());
  for (const SparseExample* ex : examples) {
    double s = bias;
    for (const auto& f : ex->features)
      if (f.index < dim) s += weights[f.index] * f.value;
    hinge += std::max(0.0, 1.0 - ex->label * s);
  }
  return 0.5 * reg + cost * hinge;
}

// Dual coordinate descent for the L1-loss C-SVM (Hsieh et al., ICML 2008),
// with the bias handled as a regularized constant feature and liblinear's
// projected-gradient shrinking. Terminates on the relative duality gap
//   primal - dual <= tolerance * max(1, |primal|),
// checked on full passes, which bounds the objective suboptimality by the
// same amount.
TrainedModel train_svm(std::span<const SparseExample* const> examples, int dim,
                       const TrainConfig& config) {
  const int n = static_cast<int>(examples.size());
  const double C = config.cost;
  const int max_epochs = config.max_iterations > 0 ? config.max_iterations : 100000;

  bool has_pos = false, has_neg = false;
  for (const SparseExample* ex : examples) (ex->label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    TrainedModel m;
    m.kind = LearnerKind::svm;
    m.weights.assign(dim, 0.0);
    m.bias = has_pos ? 1e6 : -1e6;
    return m;
  }

  std::vector<double> w(dim + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qd(n);
  std::vector<signed char> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = static_cast<signed char>(examples[i]->label);
    double norm = 1.0;  // constant bias feature
    for (const auto& f : examples[i]->features) norm += f.value * f.value;
    qd[i] = norm;
  }

  std::vector<int> index(n);
  for (int i = 0; i < n; ++i) index[i] = i;
  Rng rng(config.seed);

  const double inf = std::numeric_limits<double>::infinity();
  double pg_max_old = inf, pg_min_old = -inf;
  double pg_eps = 0.1;
  int active = n;
  double last_rel_gap = inf;
  int epoch = 0;

  auto relative_gap = [&]() {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double hinge = 0.0, alpha_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - y[i] * augmented_dot(w, *examples[i], dim));
      alpha_sum += alpha[i];
    }
    double primal = 0.5 * reg + C * hinge;
    double dual = alpha_sum - 0.5 * reg;
    return (primal - dual) / std::max(1.0, std::fabs(primal));
  };

  while (epoch < max_epochs) {
    ++epoch;
    double pg_max_new = -inf, pg_min_new = inf;
    for (int i = 0; i < active; ++i) {
      int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(active - i)));
      std::swap(index[i], index[j]);
    }
    for (int s = 0; s < active; ++s) {
      int i = index[s];
      double g = y[i] * augmented_dot(w, *examples[i], dim) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == C) {
        if (g < pg_min_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);
      if (std::fabs(pg) > 1e-12) {
        double old = alpha[i];
        alpha[i] = std::min(std::max(old - g / qd[i], 0.0), C);
        add_scaled(w, *examples[i], dim, (alpha[i] - old) * y[i]);
      }
    }

    if (active == n) {
      last_rel_gap = relative_gap();
      if (last_rel_gap <= config.tolerance) break;
    }
    if (pg_max_new - pg_min_new <= pg_eps) {
      if (active < n) {
        active = n;  // converged on the shrunk set; re-check everything
        pg_max_old = inf;
        pg_min_old = -inf;
        continue;
      }
      pg_eps *= 0.1;  // gap still open on the full set; tighten shrinking
    }
    pg_max_old = pg_max_new <= 0.0 ? inf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -inf : pg_min_new;
  }

  double final_rel_gap = relative_gap();
  if (final_rel_gap > config.tolerance)
    throw TrainFailure("svm solver did not converge: relative duality gap " +
                           std::to_string(final_rel_gap) + " after " + std::to_string(epoch) +
                           " epochs",
                       final_rel_gap, epoch);

  TrainedModel m;
  m.kind = LearnerKind::svm;
  m.weights.assign(w.begin(), w.begin() + dim);
  m.bias = w[dim];
  m.meta.achieved_tolerance = final_rel_gap;
  m.meta.iterations = epoch;
  return m;
}

}  // namespace alstop
