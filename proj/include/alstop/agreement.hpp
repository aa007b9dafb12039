#pragma once

#include <span>

namespace alstop {

// Fraction of positions where the two prediction vectors agree. Inputs are
// +1/-1 labels of equal nonzero length.
double percent_agreement(std::span<const int> a, std::span<const int> b);

struct AgreementValue {
  double observed = 0.0;  // raw agreement fraction
  double expected = 0.0;  // chance agreement from per-vector label marginals
  double kappa = 0.0;     // (observed - expected) / (1 - expected)
  // expected == 1 exactly (both vectors constant with the same class), where
  // the ratio is undefined and kappa is pinned to 1 on perfect agreement and
  // 0 otherwise. Surfaced so downstream consumers can spot these windows.
  bool degenerate = false;
};

// Chance-corrected agreement between two prediction vectors over the same
// instances. Expected agreement multiplies the two vectors' own positive
// and negative rates, i.e. each vector is treated as its own annotator with
// its own label distribution.
AgreementValue kappa_agreement(std::span<const int> a, std::span<const int> b);

}  // namespace alstop
