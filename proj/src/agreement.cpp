#include "alstop/agreement.hpp"

#include <stdexcept>

namespace alstop {

namespace {

void check_inputs(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("prediction vectors differ in length");
  if (a.empty()) throw std::invalid_argument("prediction vectors are empty");
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] != 1 && a[i] != -1) || (b[i] != 1 && b[i] != -1))
      throw std::invalid_argument("predictions must be +1 or -1");
}

}  // namespace

double percent_agreement(std::span<const int> a, std::span<const int> b) {
  check_inputs(a, b);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) ++agree;
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

AgreementValue kappa_agreement(std::span<const int> a, std::span<const int> b) {
  check_inputs(a, b);
  const std::size_t n = a.size();
  std::size_t agree = 0, pos_a = 0, pos_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) ++agree;
    if (a[i] == 1) ++pos_a;
    if (b[i] == 1) ++pos_b;
  }
  AgreementValue out;
  out.observed = static_cast<double>(agree) / static_cast<double>(n);
  const double pa = static_cast<double>(pos_a) / static_cast<double>(n);
  const double pb = static_cast<double>(pos_b) / static_cast<double>(n);
  out.expected = pa * pb + (1.0 - pa) * (1.0 - pb);
  // Integer test for the degenerate marginals rather than a float compare.
  const bool both_all_pos = pos_a == n && pos_b == n;
  const bool both_all_neg = pos_a == 0 && pos_b == 0;
  if (both_all_pos || both_all_neg) {
    out.degenerate = true;
    out.kappa = agree == n ? 1.0 : 0.0;
    return out;
  }
  out.kappa = (out.observed - out.expected) / (1.0 - out.expected);
  return out;
}

}  // namespace alstop
