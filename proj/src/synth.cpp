#include "alstop/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "alstop/rng.hpp"

namespace alstop {

Dataset generate_synthetic(const SynthConfig& config) {
  if (config.n < 2 || config.dim < 4) throw std::invalid_argument("synthetic dataset too small");
  if (config.base_rate < 0.0 || config.peak_rate < 0.0 ||
      config.base_rate + config.peak_rate > 1.0)
    throw std::invalid_argument("activation rates out of range");
  if (config.label_noise < 0.0 || config.label_noise >= 0.5)
    throw std::invalid_argument("label noise must be in [0, 0.5)");

  const double center_pos = config.dim / 3.0;
  const double center_neg = 2.0 * config.dim / 3.0;
  const double sigma = config.dim / 8.0;

  std::vector<double> rate_pos(config.dim), rate_neg(config.dim);
  for (int j = 0; j < config.dim; ++j) {
    const double dp = (j - center_pos) / sigma;
    const double dn = (j - center_neg) / sigma;
    rate_pos[j] = config.base_rate + config.peak_rate * std::exp(-0.5 * dp * dp);
    rate_neg[j] = config.base_rate + config.peak_rate * std::exp(-0.5 * dn * dn);
  }

  Rng rng(derive_seed(config.seed, "synth"));
  Dataset ds;
  ds.dim = config.dim;
  ds.examples.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    const int true_label = rng.bernoulli(0.5) ? 1 : -1;
    const auto& rates = true_label == 1 ? rate_pos : rate_neg;
    SparseExample ex;
    ex.id = i;
    for (int j = 0; j < config.dim; ++j)
      if (rng.bernoulli(rates[j])) ex.features.push_back({j, 1.0});
    ex.label = rng.bernoulli(config.label_noise) ? -true_label : true_label;
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace alstop
