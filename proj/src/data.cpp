#include "alstop/data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "alstop/rng.hpp"

namespace alstop {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line_no, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_sparse_lines(std::istream& in, const std::string& origin) {
  Dataset ds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) parse_fail(origin, line_no, "missing label");
    SparseExample ex;
    ex.id = line_no - 1;
    if (tok == "+1" || tok == "1") {
      ex.label = 1;
    } else if (tok == "-1") {
      ex.label = -1;
    } else {
      parse_fail(origin, line_no, "unrecognized label '" + tok + "'");
    }
    int last_index = -1;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
        parse_fail(origin, line_no, "malformed feature '" + tok + "'");
      int index;
      double value;
      try {
        std::size_t used;
        index = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(tok);
        std::string val_str = tok.substr(colon + 1);
        value = std::stod(val_str, &used);
        if (used != val_str.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        parse_fail(origin, line_no, "malformed feature '" + tok + "'");
      }
      if (index < 0) parse_fail(origin, line_no, "negative feature index");
      if (index <= last_index)
        parse_fail(origin, line_no, "feature indices not strictly ascending");
      if (!(value > 0.0)) parse_fail(origin, line_no, "non-positive feature value");
      last_index = index;
      ex.features.push_back({index, value});
      if (index + 1 > ds.dim) ds.dim = index + 1;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

Dataset load_sparse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_sparse_lines(in, path);
}

void write_sparse_lines(std::ostream& out, const Dataset& ds) {
  for (const auto& ex : ds.examples) {
    out << (ex.label >= 0 ? "+1" : "-1");
    for (const auto& f : ex.features) out << ' ' << f.index << ':' << format_g17(f.value);
    out << '\n';
  }
}

void save_sparse_file(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_sparse_lines(out, ds);
}

std::vector<int> FoldPlan::test_ids(int fold) const {
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(assignment.size()); ++i)
    if (assignment[i] == fold) ids.push_back(i);
  return ids;
}

std::vector<int> FoldPlan::pool_ids(int fold) const {
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(assignment.size()); ++i)
    if (assignment[i] != fold) ids.push_back(i);
  return ids;
}

FoldPlan make_folds(int n_examples, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be at least 2");
  if (n_examples < k) throw std::invalid_argument("fewer examples than folds");
  std::vector<int> order(n_examples);
  for (int i = 0; i < n_examples; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  FoldPlan plan;
  plan.k = k;
  plan.rng_seed = seed;
  plan.assignment.assign(n_examples, 0);
  for (int pos = 0; pos < n_examples; ++pos) plan.assignment[order[pos]] = pos % k;
  return plan;
}

void write_fold_manifest(const std::string& path, const FoldPlan& plan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "example_id,fold_index\n";
  for (int i = 0; i < static_cast<int>(plan.assignment.size()); ++i)
    out << i << ',' << plan.assignment[i] << '\n';
}

}  // namespace alstop
