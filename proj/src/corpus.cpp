#include "alstop/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fs = std::filesystem;

namespace alstop {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary build_vocabulary(std::span<const Document> docs, int min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be at least 1");
  std::unordered_map<std::string, long> counts;
  for (const auto& doc : docs)
    for (auto& tok : tokenize(doc.text)) ++counts[tok];
  Vocabulary vocab;
  vocab.min_count = min_count;
  vocab.train_doc_count = static_cast<int>(docs.size());
  for (auto& [term, count] : counts)
    if (count >= min_count) vocab.term_index.emplace(term, 0);
  if (vocab.term_index.empty())
    throw std::runtime_error("empty vocabulary: no term reaches " + std::to_string(min_count) +
                             " occurrences");
  int next = 0;
  for (auto& [term, index] : vocab.term_index) index = next++;  // map order is lexicographic
  return vocab;
}

SparseExample featurize(const Document& doc, const Vocabulary& vocab, int id) {
  SparseExample ex;
  ex.id = id;
  ex.label = doc.label;
  std::vector<int> indices;
  for (auto& tok : tokenize(doc.text)) {
    auto it = vocab.term_index.find(tok);
    if (it != vocab.term_index.end()) indices.push_back(it->second);
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  ex.features.reserve(indices.size());
  for (int idx : indices) ex.features.push_back({idx, 1.0});
  return ex;
}

std::pair<Vocabulary, std::vector<SparseExample>> tokenize_and_binarize(
    std::span<const Document> docs, int min_count) {
  Vocabulary vocab = build_vocabulary(docs, min_count);
  std::vector<SparseExample> examples;
  examples.reserve(docs.size());
  for (int i = 0; i < static_cast<int>(docs.size()); ++i)
    examples.push_back(featurize(docs[i], vocab, i));
  return {std::move(vocab), std::move(examples)};
}

std::vector<Document> load_class_dirs(const std::string& root, const std::string& positive_class) {
  if (!fs::is_directory(root)) throw std::runtime_error(root + " is not a directory");
  std::vector<std::string> classes;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) classes.push_back(entry.path().filename().string());
  std::sort(classes.begin(), classes.end());
  if (classes.size() < 2)
    throw std::runtime_error(root + ": need at least two class subdirectories");
  std::string positive = positive_class.empty() ? classes.front() : positive_class;
  if (std::find(classes.begin(), classes.end(), positive) == classes.end())
    throw std::runtime_error("positive class '" + positive + "' not found under " + root);

  std::vector<Document> docs;
  for (const auto& cls : classes) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fs::path(root) / cls))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("class directory " + cls + " has no files");
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw std::runtime_error("cannot read " + file.string());
      std::ostringstream body;
      body << in.rdbuf();
      docs.push_back({body.str(), cls == positive ? 1 : -1});
    }
  }
  return docs;
}

void dump_vocabulary(const std::string& path, const Vocabulary& vocab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::vector<const std::string*> by_index(vocab.term_index.size());
  for (const auto& [term, index] : vocab.term_index) by_index[index] = &term;
  for (std::size_t i = 0; i < by_index.size(); ++i) out << *by_index[i] << '\t' << i << '\n';
}

}  // namespace alstop
