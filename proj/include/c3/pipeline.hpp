#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "c3/corpus.hpp"
#include "c3/features.hpp"
#include "c3/linear.hpp"

namespace c3 {

// Lexicons, spelling dictionary and function-word list shipped under data/.
struct FeatureResources {
  LexiconSet lexicons;
  std::unordered_set<std::string> dictionary;
  std::unordered_set<std::string> function_words;
};

inline FeatureResources load_feature_resources(const std::string& data_dir) {
  FeatureResources r;
  r.lexicons = load_lexicon_set(data_dir + "/lexicons");
  r.dictionary = load_wordlist(data_dir + "/dictionary.txt");
  r.function_words = load_wordlist(data_dir + "/function_words.txt");
  return r;
}

// Vocabulary is built from the training corpus only; aux-score availability
// is resolved on the training corpus and applied to both sides.
inline FeatureExtractor build_extractor(const std::vector<LabeledComment>& train,
                                        const FeatureResources& resources,
                                        const FeatureConfig& config) {
  config.validate();
  NgramVocabulary vocab;
  if (config.wants("lexical")) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (const auto& c : train) docs.push_back(tokenize(c.raw.text).word_tokens);
    vocab = build_vocab(docs, config.min_df);
  }
  return FeatureExtractor(config, resources.lexicons, resources.dictionary,
                          resources.function_words, std::move(vocab),
                          resolve_aux_groups(train, config.aux));
}

inline DenseLayout layout_of(const FeatureExtractor& ex) {
  const FeatureConfig& cfg = ex.config();
  DenseLayout layout;
  if (cfg.wants("length")) layout.blocks.emplace_back("length", 4);
  if (cfg.wants("argumentation")) layout.blocks.emplace_back("argumentation", 5);
  if (cfg.wants("named_entity")) layout.blocks.emplace_back("named_entity", 1);
  if (cfg.wants("text_quality")) layout.blocks.emplace_back("text_quality", 5);
  if (cfg.wants("content_quality") && ex.aux_enabled().count("content_quality"))
    layout.blocks.emplace_back("content_quality", 3);
  if (cfg.wants("aggressiveness") && ex.aux_enabled().count("aggressiveness"))
    layout.blocks.emplace_back("aggressiveness", 3);
  if (cfg.wants("toxicity") && ex.aux_enabled().count("toxicity"))
    layout.blocks.emplace_back("toxicity", static_cast<int>(cfg.aux.toxicity.size()));
  return layout;
}

inline bool lexical_active(const FeatureExtractor& ex) {
  return ex.config().wants("lexical");
}

inline Dataset make_dataset(const FeatureExtractor& extractor,
                            const std::vector<LabeledComment>& corpus) {
  const DenseLayout layout = layout_of(extractor);
  Dataset d;
  d.dense_dim = layout.dim();
  d.sparse_dim =
      lexical_active(extractor) ? static_cast<int>(extractor.vocab().size()) * 2 : 0;
  d.examples.reserve(corpus.size());
  d.labels.reserve(corpus.size());
  for (const auto& c : corpus) {
    const FeatureVector v = extractor.extract(c.raw);
    d.examples.push_back(to_example(v, layout, extractor.vocab().size()));
    d.labels.push_back(c.label == Label::constructive ? 1 : 0);
  }
  return d;
}

// Restricts a full dataset to a subset of feature groups. "lexical" selects
// the sparse block; dense groups are sliced out of the full layout. Results
// per group are independent of which other groups were extracted.
inline Dataset project_dataset(const Dataset& full, const DenseLayout& full_layout,
                               const std::set<std::string>& groups) {
  DenseLayout sub;
  std::vector<std::pair<int, int>> keep;  // offset, width
  int at = 0;
  for (const auto& [name, width] : full_layout.blocks) {
    if (groups.count(name)) {
      sub.blocks.emplace_back(name, width);
      keep.emplace_back(at, width);
    }
    at += width;
  }
  const bool want_sparse = groups.count("lexical") > 0;
  if (sub.dim() == 0 && (!want_sparse || full.sparse_dim == 0))
    throw UsageError("feature selection resolves to zero usable features");

  Dataset d;
  d.dense_dim = sub.dim();
  d.sparse_dim = want_sparse ? full.sparse_dim : 0;
  d.labels = full.labels;
  d.examples.reserve(full.size());
  for (const auto& ex : full.examples) {
    Example e;
    e.dense = Eigen::VectorXd::Zero(d.dense_dim);
    int out = 0;
    for (const auto& [off, width] : keep) {
      e.dense.segment(out, width) = ex.dense.segment(off, width);
      out += width;
    }
    if (want_sparse) e.sparse = ex.sparse;
    d.examples.push_back(std::move(e));
  }
  return d;
}

}  // namespace c3
