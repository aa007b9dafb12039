#pragma once

#include <cstdint>

#include "alstop/data.hpp"

namespace alstop {

// Seeded two-class generator with sparse binary features. Each class
// activates features by a Gaussian-bump profile over the index range (bumps
// centered at dim/3 and 2*dim/3 on top of a shared base rate), and the
// gold label flips with probability label_noise. The overlap between the
// profiles plus the noise keeps late-stage batches informative enough that
// margin-based criteria fire much later than agreement-based ones.
struct SynthConfig {
  int n = 5000;
  int dim = 300;
  double base_rate = 0.02;   // class-independent activation
  double peak_rate = 0.20;   // extra activation at the class bump center
  double label_noise = 0.02;
  std::uint64_t seed = 1;
};

Dataset generate_synthetic(const SynthConfig& config);

}  // namespace alstop
