#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "alstop/train.hpp"

namespace alstop {

namespace {

// log(1 + exp(t)) without overflow.
double log1pexp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double maxent_objective(std::span<const SparseExample* const> examples,
                        std::span<const double> weights, double bias, double lambda) {
  const int dim = static_cast<int>(weights.size());
  double reg = 0.0;
  for (double v : weights) reg += v * v;
  double loss = 0.0;
  for (const SparseExample* ex : examples) {
    double s = bias;
    for (const auto& f : ex->features)
      if (f.index < dim) s += weights[f.index] * f.value;
    loss += log1pexp(-ex->label * s);
  }
  return 0.5 * lambda * reg + loss / static_cast<double>(examples.size());
}

void maxent_gradient(std::span<const SparseExample* const> examples,
                     std::span<const double> weights, double bias, double lambda,
                     std::span<double> grad) {
  const int dim = static_cast<int>(weights.size());
  const double inv_n = 1.0 / static_cast<double>(examples.size());
  for (int i = 0; i < dim; ++i) grad[i] = lambda * weights[i];
  grad[dim] = 0.0;
  for (const SparseExample* ex : examples) {
    double s = bias;
    for (const auto& f : ex->features)
      if (f.index < dim) s += weights[f.index] * f.value;
    double coeff = -ex->label * sigmoid(-ex->label * s) * inv_n;
    for (const auto& f : ex->features)
      if (f.index < dim) grad[f.index] += coeff * f.value;
    grad[dim] += coeff;
  }
}

// L-BFGS (history 10) with Armijo backtracking on the mean logistic loss.
// Deterministic: starts from zero and uses no randomness, so config.seed is
// irrelevant here.
TrainedModel train_maxent(std::span<const SparseExample* const> examples, int dim,
                          const TrainConfig& config) {
  bool has_pos = false, has_neg = false;
  for (const SparseExample* ex : examples) (ex->label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("maxent training needs both classes present");

  const int max_iters = config.max_iterations > 0 ? config.max_iterations : 500;
  const double lambda = config.lambda;
  const std::size_t history = 10;

  std::vector<double> x(dim + 1, 0.0);
  std::vector<double> g(dim + 1, 0.0);
  auto objective = [&](const std::vector<double>& p) {
    return maxent_objective(examples, std::span<const double>(p.data(), dim), p[dim], lambda);
  };
  auto gradient = [&](const std::vector<double>& p, std::vector<double>& out) {
    maxent_gradient(examples, std::span<const double>(p.data(), dim), p[dim], lambda, out);
  };

  double f = objective(x);
  gradient(x, g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  double gnorm = std::sqrt(dot(g, g));
  int iter = 0;
  while (gnorm > config.tolerance && iter < max_iters) {
    ++iter;
    // two-loop recursion
    std::vector<double> q = g;
    std::vector<double> alphas(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alphas[i] = rho_hist[i] * dot(s_hist[i], q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alphas[i] * y_hist[i][j];
    }
    if (!s_hist.empty()) {
      double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      double beta = rho_hist[i] * dot(y_hist[i], q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alphas[i] - beta) * s_hist[i][j];
    }
    // q approximates H*g; step direction is -q
    double descent = dot(g, q);
    if (!(descent > 0.0)) {  // fall back to steepest descent
      q = g;
      descent = dot(g, g);
    }

    double step = 1.0;
    std::vector<double> x_new(x.size());
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < x.size(); ++j) x_new[j] = x[j] - step * q[j];
      f_new = objective(x_new);
      if (f_new <= f - 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow; gradient check below decides

    std::vector<double> g_new(g.size());
    gradient(x_new, g_new);
    std::vector<double> s_vec(x.size()), y_vec(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      s_vec[j] = x_new[j] - x[j];
      y_vec[j] = g_new[j] - g[j];
    }
    double sy = dot(s_vec, y_vec);
    if (sy > 1e-12) {  // keep the inverse-Hessian estimate positive definite
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    gnorm = std::sqrt(dot(g, g));
  }

  if (gnorm > config.tolerance)
    throw TrainFailure("maxent solver did not converge: gradient norm " + std::to_string(gnorm) +
                           " after " + std::to_string(iter) + " iterations",
                       gnorm, iter);

  TrainedModel m;
  m.kind = LearnerKind::maxent;
  m.weights.assign(x.begin(), x.begin() + dim);
  m.bias = x[dim];
  m.meta.achieved_tolerance = gnorm;
  m.meta.iterations = iter;
  return m;
}

// Declared in train_svm.cpp.
TrainedModel train_svm(std::span<const SparseExample* const> examples, int dim,
                       const TrainConfig& config);

TrainedModel train(std::span<const SparseExample* const> examples, int dim,
                   const TrainConfig& config) {
  if (examples.empty()) throw std::invalid_argument("cannot train on zero examples");
  for (const SparseExample* ex : examples)
    if (!ex->has_gold()) throw std::invalid_argument("training example lacks a gold label");
  if (!(config.cost > 0.0)) throw std::invalid_argument("svm cost must be positive");
  if (!(config.lambda > 0.0)) throw std::invalid_argument("maxent lambda must be positive");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (config.kind == LearnerKind::svm) return train_svm(examples, dim, config);
  return train_maxent(examples, dim, config);
}

TrainedModel train(const Dataset& data, std::span<const int> ids, const TrainConfig& config) {
  std::vector<const SparseExample*> ptrs;
  ptrs.reserve(ids.size());
  for (int id : ids) ptrs.push_back(&data.examples[id]);
  return train(std::span<const SparseExample* const>(ptrs), data.dim, config);
}

}  // namespace alstop
