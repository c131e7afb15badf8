#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "c3/errors.hpp"
#include "c3/lexicon.hpp"

namespace c3 {

// Sparse vector sorted by index.
using SparseVector = std::vector<std::pair<int, double>>;

constexpr int kMaxNgramOrder = 3;

// 1- to 3-grams over lowercased word tokens; keys join tokens with '_'.
inline std::vector<std::string> ngram_keys(const std::vector<std::string>& tokens) {
  std::vector<std::string> keys;
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(detail::ascii_lower(t));
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    if (static_cast<int>(lower.size()) < n) break;
    for (std::size_t i = 0; i + n <= lower.size(); ++i) {
      std::string key = lower[i];
      for (int k = 1; k < n; ++k) {
        key.push_back('_');
        key += lower[i + k];
      }
      keys.push_back(std::move(key));
    }
  }
  return keys;
}

struct NgramVocabulary {
  std::vector<std::string> keys;                 // lexicographic, dense 0..V-1
  std::unordered_map<std::string, int> index;
  std::vector<std::size_t> df;                   // document frequency per key
  std::size_t corpus_size = 0;

  std::size_t size() const { return keys.size(); }
};

// Retains every n-gram whose document frequency reaches min_df. Lexicographic
// key order makes indices deterministic.
inline NgramVocabulary build_vocab(const std::vector<std::vector<std::string>>& docs,
                                   std::size_t min_df) {
  if (docs.empty()) throw UsageError("build_vocab: empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::unordered_set<std::string> seen;
    for (auto& key : ngram_keys(doc)) seen.insert(std::move(key));
    for (const auto& key : seen) ++df[key];
  }
  NgramVocabulary vocab;
  vocab.corpus_size = docs.size();
  for (const auto& [key, count] : df)
    if (count >= min_df) vocab.keys.push_back(key);
  std::sort(vocab.keys.begin(), vocab.keys.end());
  vocab.df.resize(vocab.keys.size());
  for (std::size_t i = 0; i < vocab.keys.size(); ++i) {
    vocab.index.emplace(vocab.keys[i], static_cast<int>(i));
    vocab.df[i] = df[vocab.keys[i]];
  }
  return vocab;
}

// Raw in-vocabulary n-gram counts; out-of-vocabulary n-grams are ignored.
inline SparseVector ngram_counts(const std::vector<std::string>& tokens,
                                 const NgramVocabulary& vocab) {
  std::map<int, double> counts;
  for (const auto& key : ngram_keys(tokens)) {
    auto it = vocab.index.find(key);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  }
  return SparseVector(counts.begin(), counts.end());
}

// weight = tf * (ln((N+1)/(df+1)) + 1), then L2-normalized per comment.
inline SparseVector tfidf(const std::vector<std::string>& tokens,
                          const NgramVocabulary& vocab) {
  SparseVector v = ngram_counts(tokens, vocab);
  double norm_sq = 0.0;
  for (auto& [idx, w] : v) {
    const double idf =
        std::log((static_cast<double>(vocab.corpus_size) + 1.0) /
                 (static_cast<double>(vocab.df[idx]) + 1.0)) +
        1.0;
    w *= idf;
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [idx, w] : v) {
      (void)idx;
      w *= inv;
    }
  }
  return v;
}

}  // namespace c3
