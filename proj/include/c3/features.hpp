#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "c3/corpus.hpp"
#include "c3/errors.hpp"
#include "c3/lexicon.hpp"
#include "c3/ngram.hpp"
#include "c3/tokenize.hpp"

namespace c3 {

// ---------------------------------------------------------------------------
// Individual feature groups.

namespace detail {

inline std::size_t codepoints(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;  // skip UTF-8 continuation bytes
  return n;
}

}  // namespace detail

// [token count, sentence count, mean word length (chars), mean words/sentence]
inline std::array<double, 4> length_features(const TokenizedComment& t) {
  std::array<double, 4> f = {0, 0, 0, 0};
  f[0] = static_cast<double>(t.word_count());
  f[1] = static_cast<double>(t.sentence_count());
  if (!t.word_tokens.empty()) {
    double chars = 0.0;
    for (const auto& w : t.word_tokens) chars += static_cast<double>(detail::codepoints(w));
    f[2] = chars / f[0];
  }
  if (!t.sentences.empty()) f[3] = f[0] / f[1];
  return f;
}

// Per-category hit counts divided by token count:
// [connectives, reasoning verbs, modals, abstract nouns, stance adverbials]
inline std::array<double, 5> argumentation_features(const TokenizedComment& t,
                                                    const LexiconSet& lex) {
  std::array<double, 5> f = {0, 0, 0, 0, 0};
  if (t.word_tokens.empty()) return f;
  std::vector<std::string> lower;
  lower.reserve(t.word_tokens.size());
  for (const auto& w : t.word_tokens) lower.push_back(detail::ascii_lower(w));
  const double n = static_cast<double>(lower.size());
  f[0] = static_cast<double>(count_lexicon_hits(lower, lex.discourse_connectives)) / n;
  f[1] = static_cast<double>(count_lexicon_hits(lower, lex.reasoning_verbs)) / n;
  f[2] = static_cast<double>(count_lexicon_hits(lower, lex.modals)) / n;
  f[3] = static_cast<double>(count_lexicon_hits(lower, lex.abstract_nouns)) / n;
  f[4] = static_cast<double>(count_lexicon_hits(lower, lex.stance_adverbials)) / n;
  return f;
}

// Capitalized-run heuristic: maximal runs of capitalized tokens within a
// sentence count as one entity each. A run of a single sentence-initial token
// is skipped when its lowercase form is a known word ("Hello there" has no
// entity, "Trudeau spoke" has one).
inline std::array<double, 1> named_entity_count(
    const TokenizedComment& t, const std::unordered_set<std::string>& known_words) {
  auto capitalized = [](const std::string& w) {
    return !w.empty() && w[0] >= 'A' && w[0] <= 'Z';
  };
  std::size_t entities = 0;
  for (const auto& sent : t.sentences) {
    std::size_t i = sent.begin;
    while (i < sent.end) {
      if (!capitalized(t.word_tokens[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < sent.end && capitalized(t.word_tokens[j])) ++j;
      const bool sentence_initial_single = (i == sent.begin && j == i + 1);
      if (!(sentence_initial_single &&
            known_words.count(detail::ascii_lower(t.word_tokens[i]))))
        ++entities;
      i = j;
    }
  }
  return {static_cast<double>(entities)};
}

// Vowel-group heuristic: runs of [aeiouy] count one syllable, a trailing
// silent 'e' is dropped, minimum one syllable.
inline int syllable_count(const std::string& word) {
  std::string w = detail::ascii_lower(word);
  if (w.size() > 1 && w.back() == 'e') w.pop_back();
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  return groups < 1 ? 1 : groups;
}

inline bool is_polysyllable(const std::string& word) { return syllable_count(word) >= 3; }

constexpr double kSmogBase = 3.1291;

// 1.043 * sqrt(polysyllables * 30 / sentences) + 3.1291
inline double smog_readability(const TokenizedComment& t) {
  if (t.sentence_count() == 0) return kSmogBase;
  double poly = 0.0;
  for (const auto& w : t.word_tokens)
    if (is_polysyllable(w)) poly += 1.0;
  return 1.043 * std::sqrt(poly * 30.0 / static_cast<double>(t.sentence_count())) +
         kSmogBase;
}

inline const std::unordered_set<std::string>& first_person_pronouns() {
  static const std::unordered_set<std::string> set = {
      "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"};
  return set;
}

inline const std::unordered_set<std::string>& irregular_past_forms() {
  static const std::unordered_set<std::string> set = {
      "was",    "were",  "had",    "did",    "went",   "said",   "made",  "got",
      "saw",    "came",  "took",   "knew",   "thought", "felt",  "found", "gave",
      "told",   "became", "left",  "brought", "began", "kept",   "held",  "wrote",
      "stood",  "heard", "meant",  "met",    "paid",   "ran",    "sat",   "spoke",
      "spent",  "won",   "lost",   "grew",   "drew",   "threw",  "flew",  "chose",
      "fell",   "sought", "taught", "bought", "fought", "caught", "ate",   "drank",
      "drove",  "rode",  "broke",  "wore",   "sang",   "swam",   "woke",  "built",
      "sent",   "lent",  "bent",   "read",   "learnt", "heard",  "understood"};
  return set;
}

// (first-person pronouns + past-tense cues) / token count. Past cues are an
// "-ed" suffix on words of length >= 4 plus a list of common irregular forms.
inline double personal_experience_score(const TokenizedComment& t) {
  if (t.word_tokens.empty()) return 0.0;
  double cues = 0.0;
  for (const auto& w : t.word_tokens) {
    const std::string lower = detail::ascii_lower(w);
    if (first_person_pronouns().count(lower)) {
      cues += 1.0;
      continue;
    }
    if (lower.size() >= 4 && lower.compare(lower.size() - 2, 2, "ed") == 0)
      cues += 1.0;
    else if (irregular_past_forms().count(lower))
      cues += 1.0;
  }
  return cues / static_cast<double>(t.word_count());
}

// [SMOG, personal experience, misspellings, CAPS words, punctuation tokens]
inline std::array<double, 5> text_quality_features(
    const TokenizedComment& t, const std::unordered_set<std::string>& dictionary) {
  std::array<double, 5> f = {kSmogBase, 0, 0, 0, 0};
  f[0] = smog_readability(t);
  f[1] = personal_experience_score(t);
  for (const auto& w : t.word_tokens) {
    bool has_digit = false, has_lower = false;
    std::size_t upper = 0;
    for (char c : w) {
      if (c >= '0' && c <= '9') has_digit = true;
      if (c >= 'a' && c <= 'z') has_lower = true;
      if (c >= 'A' && c <= 'Z') ++upper;
    }
    if (!has_digit) {
      std::string lower = detail::ascii_lower(w);
      // Possessive suffix is morphology, not a spelling error.
      if (lower.size() > 2 && lower.compare(lower.size() - 2, 2, "'s") == 0)
        lower.erase(lower.size() - 2);
      if (!dictionary.count(lower)) f[2] += 1.0;
    }
    if (w.size() >= 2 && upper >= 1 && !has_lower) {
      bool plain = true;
      for (char c : w)
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) plain = false;
      if (plain) f[3] += 1.0;
    }
  }
  f[4] = static_cast<double>(t.punct_tokens.size());
  return f;
}

// ---------------------------------------------------------------------------
// Ingested score columns (precomputed, never recomputed here).

struct AuxColumnConfig {
  std::vector<std::string> content_quality = {"coherence", "unsubstantial", "spam"};
  std::vector<std::string> aggressiveness = {"attack_author", "attack_commenter",
                                             "attack_publisher"};
  // The shipped corpus carries eight toxicity-style columns; the exact set is
  // configurable because releases differ in which attributes they include.
  std::vector<std::string> toxicity = {"severe_toxicity", "sexually_explicit",
                                       "toxicity",        "identity_hate",
                                       "insults",         "obscenity",
                                       "threats",         "inflammatory"};
};

// A group is enabled only when every configured column is present in every
// comment; a partially present group is a configuration error.
// Missing groups are disabled corpus-wide, never imputed per row.
inline std::set<std::string> resolve_aux_groups(const std::vector<LabeledComment>& corpus,
                                                const AuxColumnConfig& cfg) {
  std::set<std::string> enabled;
  auto probe = [&](const std::string& group, const std::vector<std::string>& cols) {
    std::size_t full = 0, partial = 0;
    for (const auto& c : corpus) {
      std::size_t present = 0;
      for (const auto& name : cols)
        if (c.raw.aux_scores.count(name)) ++present;
      if (present == cols.size()) ++full;
      else if (present > 0) ++partial;
    }
    if (partial > 0 || (full > 0 && full < corpus.size()))
      throw ConfigError("aux score group '" + group + "' is only partially present");
    if (full == corpus.size() && !corpus.empty()) enabled.insert(group);
  };
  probe("content_quality", cfg.content_quality);
  probe("aggressiveness", cfg.aggressiveness);
  probe("toxicity", cfg.toxicity);
  return enabled;
}

// ---------------------------------------------------------------------------
// Full vector assembly.

struct FeatureVector {
  SparseVector lexical_counts;
  SparseVector lexical_tfidf;
  std::optional<std::array<double, 4>> length;
  std::optional<std::array<double, 5>> argumentation;
  std::optional<std::array<double, 1>> named_entity;
  std::optional<std::array<double, 5>> text_quality;
  std::optional<std::array<double, 3>> content_quality;
  std::optional<std::array<double, 3>> aggressiveness;
  std::optional<std::vector<double>> toxicity;
  bool lexical_enabled = false;
};

inline const std::vector<std::string>& feature_group_names() {
  static const std::vector<std::string> names = {
      "lexical",         "length",        "argumentation", "named_entity",
      "text_quality",    "content_quality", "aggressiveness", "toxicity"};
  return names;
}

struct FeatureConfig {
  std::set<std::string> groups = {feature_group_names().begin(),
                                  feature_group_names().end()};
  AuxColumnConfig aux;
  std::size_t min_df = 2;

  bool wants(const std::string& g) const { return groups.count(g) > 0; }

  void validate() const {
    for (const auto& g : groups)
      if (std::find(feature_group_names().begin(), feature_group_names().end(), g) ==
          feature_group_names().end())
        throw ConfigError("unknown feature group '" + g + "'");
  }
};

// Immutable after construction; extraction is a pure function of the text and
// may run on many comments in parallel.
class FeatureExtractor {
 public:
  FeatureExtractor(FeatureConfig config, LexiconSet lexicons,
                   std::unordered_set<std::string> dictionary,
                   std::unordered_set<std::string> function_words,
                   NgramVocabulary vocab, std::set<std::string> aux_enabled)
      : config_(std::move(config)),
        lexicons_(std::move(lexicons)),
        dictionary_(std::move(dictionary)),
        function_words_(std::move(function_words)),
        vocab_(std::move(vocab)),
        aux_enabled_(std::move(aux_enabled)) {
    config_.validate();
    known_words_ = dictionary_;
    known_words_.insert(function_words_.begin(), function_words_.end());
  }

  const FeatureConfig& config() const { return config_; }
  const NgramVocabulary& vocab() const { return vocab_; }
  const std::set<std::string>& aux_enabled() const { return aux_enabled_; }

  FeatureVector extract(const RawComment& comment) const {
    return extract(comment, tokenize(comment.text));
  }

  FeatureVector extract(const RawComment& comment, const TokenizedComment& t) const {
    FeatureVector v;
    if (config_.wants("lexical")) {
      v.lexical_enabled = true;
      v.lexical_counts = ngram_counts(t.word_tokens, vocab_);
      v.lexical_tfidf = tfidf(t.word_tokens, vocab_);
    }
    if (config_.wants("length")) v.length = length_features(t);
    if (config_.wants("argumentation"))
      v.argumentation = argumentation_features(t, lexicons_);
    if (config_.wants("named_entity"))
      v.named_entity = named_entity_count(t, known_words_);
    if (config_.wants("text_quality"))
      v.text_quality = text_quality_features(t, dictionary_);
    if (config_.wants("content_quality") && aux_enabled_.count("content_quality"))
      v.content_quality = pull<3>(comment, config_.aux.content_quality);
    if (config_.wants("aggressiveness") && aux_enabled_.count("aggressiveness"))
      v.aggressiveness = pull<3>(comment, config_.aux.aggressiveness);
    if (config_.wants("toxicity") && aux_enabled_.count("toxicity")) {
      std::vector<double> tox;
      tox.reserve(config_.aux.toxicity.size());
      for (const auto& name : config_.aux.toxicity) tox.push_back(aux_value(comment, name));
      v.toxicity = std::move(tox);
    }
    return v;
  }

 private:
  static double aux_value(const RawComment& c, const std::string& name) {
    auto it = c.aux_scores.find(name);
    if (it == c.aux_scores.end())
      throw DataError("comment " + c.id + ": missing aux score '" + name + "'");
    return it->second;
  }

  template <std::size_t N>
  static std::array<double, N> pull(const RawComment& c,
                                    const std::vector<std::string>& names) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = aux_value(c, names[i]);
    return out;
  }

  FeatureConfig config_;
  LexiconSet lexicons_;
  std::unordered_set<std::string> dictionary_;
  std::unordered_set<std::string> function_words_;
  std::unordered_set<std::string> known_words_;
  NgramVocabulary vocab_;
  std::set<std::string> aux_enabled_;
};

// ---------------------------------------------------------------------------
// Dense/sparse example layout shared with the linear models.

struct DenseLayout {
  std::vector<std::pair<std::string, int>> blocks;  // group name, width

  int dim() const {
    int d = 0;
    for (const auto& [name, w] : blocks) {
      (void)name;
      d += w;
    }
    return d;
  }
  std::vector<std::string> column_names(const AuxColumnConfig& aux) const;
};

struct Example {
  Eigen::VectorXd dense;
  SparseVector sparse;  // lexical counts then tfidf, offset by vocab size
};

inline DenseLayout dense_layout_for(const FeatureVector& v) {
  DenseLayout layout;
  if (v.length) layout.blocks.emplace_back("length", 4);
  if (v.argumentation) layout.blocks.emplace_back("argumentation", 5);
  if (v.named_entity) layout.blocks.emplace_back("named_entity", 1);
  if (v.text_quality) layout.blocks.emplace_back("text_quality", 5);
  if (v.content_quality) layout.blocks.emplace_back("content_quality", 3);
  if (v.aggressiveness) layout.blocks.emplace_back("aggressiveness", 3);
  if (v.toxicity) layout.blocks.emplace_back("toxicity", static_cast<int>(v.toxicity->size()));
  return layout;
}

// Concatenates the enabled groups: dense blocks in canonical order, sparse
// block = [counts | tfidf] with tfidf indices offset by the vocabulary size.
inline Example to_example(const FeatureVector& v, const DenseLayout& layout,
                          std::size_t vocab_size) {
  Example ex;
  ex.dense = Eigen::VectorXd::Zero(layout.dim());
  int at = 0;
  auto put = [&](const double* data, int n) {
    for (int i = 0; i < n; ++i) ex.dense[at + i] = data[i];
    at += n;
  };
  for (const auto& [name, width] : layout.blocks) {
    if (name == "length") put(v.length->data(), width);
    else if (name == "argumentation") put(v.argumentation->data(), width);
    else if (name == "named_entity") put(v.named_entity->data(), width);
    else if (name == "text_quality") put(v.text_quality->data(), width);
    else if (name == "content_quality") put(v.content_quality->data(), width);
    else if (name == "aggressiveness") put(v.aggressiveness->data(), width);
    else if (name == "toxicity") put(v.toxicity->data(), width);
    else throw Error("unknown dense block '" + name + "'");
  }
  if (v.lexical_enabled) {
    ex.sparse = v.lexical_counts;
    for (const auto& [idx, val] : v.lexical_tfidf)
      ex.sparse.emplace_back(idx + static_cast<int>(vocab_size), val);
  }
  return ex;
}

inline std::vector<std::string> DenseLayout::column_names(
    const AuxColumnConfig& aux) const {
  std::vector<std::string> names;
  for (const auto& [group, width] : blocks) {
    if (group == "length") {
      names.insert(names.end(), {"len.tokens", "len.sentences", "len.mean_word_chars",
                                 "len.mean_words_per_sentence"});
    } else if (group == "argumentation") {
      names.insert(names.end(), {"arg.connectives", "arg.reasoning_verbs", "arg.modals",
                                 "arg.abstract_nouns", "arg.stance_adverbials"});
    } else if (group == "named_entity") {
      names.push_back("ne.count");
    } else if (group == "text_quality") {
      names.insert(names.end(), {"tq.smog", "tq.personal_experience", "tq.misspellings",
                                 "tq.caps_words", "tq.punct_tokens"});
    } else if (group == "content_quality") {
      for (const auto& c : aux.content_quality) names.push_back("cq." + c);
    } else if (group == "aggressiveness") {
      for (const auto& c : aux.aggressiveness) names.push_back("agg." + c);
    } else if (group == "toxicity") {
      for (const auto& c : aux.toxicity) names.push_back("tox." + c);
    } else {
      for (int i = 0; i < width; ++i) names.push_back(group + "." + std::to_string(i));
    }
  }
  return names;
}

}  // namespace c3
