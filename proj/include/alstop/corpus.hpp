#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alstop/data.hpp"

namespace alstop {

struct Document {
  std::string text;
  int label = 0;  // +1 / -1
};

// Lowercases and splits on runs of non-alphanumeric bytes. Tokens carry no
// positions; downstream features are presence-based.
std::vector<std::string> tokenize(std::string_view text);

// Term -> dense 0-based index, ordered lexicographically over qualifying
// terms. Qualification counts every occurrence, not one per document.
struct Vocabulary {
  std::map<std::string, int> term_index;
  int min_count = 0;
  int train_doc_count = 0;
};

Vocabulary build_vocabulary(std::span<const Document> docs, int min_count);

// Binary presence features over the vocabulary; terms outside it are
// dropped, so featurizing held-out documents with a training vocabulary
// leaks nothing.
SparseExample featurize(const Document& doc, const Vocabulary& vocab, int id);

std::pair<Vocabulary, std::vector<SparseExample>> tokenize_and_binarize(
    std::span<const Document> docs, int min_count);

// Directory-per-class layout: each subdirectory of root is a class, each
// regular file inside is one document. Documents are ordered by
// (class name, file name) and labeled +1 for positive_class, -1 otherwise.
// An empty positive_class selects the lexicographically first class.
std::vector<Document> load_class_dirs(const std::string& root, const std::string& positive_class);

// One "term<TAB>index" line per vocabulary entry, index order.
void dump_vocabulary(const std::string& path, const Vocabulary& vocab);

}  // namespace alstop
