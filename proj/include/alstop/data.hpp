#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace alstop {

struct SparseFeature {
  int index;
  double value;
};

// Feature-indexed sparse vector with an optional gold label; the unit of
// annotation. label is +1 or -1; 0 means no gold label attached.
struct SparseExample {
  int id = 0;
  std::vector<SparseFeature> features;  // indices strictly increasing
  int label = 0;

  bool has_gold() const { return label != 0; }
};

struct Dataset {
  std::vector<SparseExample> examples;  // invariant: examples[i].id == i
  int dim = 0;                          // feature count (max index + 1)
};

// Sparse text lines in svmlight style: "<label> <idx>:<val> ...".
// Labels "+1"/"1" map to +1 and "-1" to -1; feature indices must be
// strictly ascending and values positive. A bare label line is a legal
// empty feature vector. Example ids are 0-based line numbers. Parse errors
// carry the 1-based line number.
Dataset parse_sparse_lines(std::istream& in, const std::string& origin);
Dataset load_sparse_file(const std::string& path);
void write_sparse_lines(std::ostream& out, const Dataset& ds);
void save_sparse_file(const std::string& path, const Dataset& ds);

// Cross-validation fold assignment: seeded shuffle of ids, then round-robin,
// so fold sizes differ by at most one.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;  // example id -> fold index
  std::uint64_t rng_seed = 0;

  std::vector<int> test_ids(int fold) const;
  std::vector<int> pool_ids(int fold) const;
};

FoldPlan make_folds(int n_examples, int k, std::uint64_t seed);

// CSV with header "example_id,fold_index", one row per example.
void write_fold_manifest(const std::string& path, const FoldPlan& plan);

}  // namespace alstop
