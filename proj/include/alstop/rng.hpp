#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace alstop {

// 64-bit finalizer from splitmix64 (Steele et al., "Fast splittable
// pseudorandom number generators"). Also used to fold purpose tags into
// sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// One master seed fans out into independent streams keyed by a purpose
// string ("fold3/stopset", "folds", ...). Consumers of one stream cannot
// perturb another, so adding a consumer never shifts existing draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose) {
  return mix64(master ^ fnv1a64(purpose));
}

// splitmix64 stream. All sampling in this project goes through this class;
// <random> distributions are implementation-defined and would break
// cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n); n >= 1. Rejection sampling removes the
  // modulo bias of next() % n.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// First k entries of a seeded partial Fisher-Yates pass over `items`.
// The returned order is part of the draw; callers that need a canonical
// order sort the result themselves.
inline std::vector<int> sample_without_replacement(std::vector<int> items, std::size_t k,
                                                   Rng& rng) {
  if (k > items.size()) k = items.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

}  // namespace alstop
