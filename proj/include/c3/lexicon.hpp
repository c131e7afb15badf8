#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "c3/errors.hpp"
#include "c3/tokenize.hpp"

namespace c3 {

namespace detail {

inline std::string ascii_lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

}  // namespace detail

// One lexicon entry = a contiguous token sequence ("due to" is two tokens).
using LexiconEntry = std::vector<std::string>;
using Lexicon = std::vector<LexiconEntry>;

// Lexicon file: one entry per line, '#' starts a comment, blank lines ignored.
inline Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open lexicon file: " + path);
  Lexicon out;
  std::set<LexiconEntry> seen;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    LexiconEntry entry;
    for (const auto& tok : tokenize(line).word_tokens)
      entry.push_back(detail::ascii_lower(tok));
    if (entry.empty()) continue;
    if (seen.insert(entry).second) out.push_back(std::move(entry));
  }
  return out;
}

struct LexiconSet {
  Lexicon discourse_connectives;
  Lexicon reasoning_verbs;
  Lexicon modals;
  Lexicon abstract_nouns;
  Lexicon stance_adverbials;
};

// Expects the five fixed file names under `dir`.
inline LexiconSet load_lexicon_set(const std::string& dir) {
  LexiconSet set;
  set.discourse_connectives = load_lexicon_file(dir + "/discourse_connectives.txt");
  set.reasoning_verbs = load_lexicon_file(dir + "/reasoning_verbs.txt");
  set.modals = load_lexicon_file(dir + "/modals.txt");
  set.abstract_nouns = load_lexicon_file(dir + "/abstract_nouns.txt");
  set.stance_adverbials = load_lexicon_file(dir + "/stance_adverbials.txt");
  return set;
}

// Word list: one word per line, case-folded on load.
inline std::unordered_set<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open word list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = 0, e = line.size();
    while (b < e && detail::is_space_char(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && detail::is_space_char(static_cast<unsigned char>(line[e - 1]))) --e;
    if (e > b) words.insert(detail::ascii_lower(line.substr(b, e - b)));
  }
  return words;
}

// Count of entry occurrences in the (lowercased) token stream; multi-word
// entries must appear as contiguous runs.
inline std::size_t count_lexicon_hits(const std::vector<std::string>& lower_tokens,
                                      const Lexicon& lex) {
  std::size_t hits = 0;
  for (const auto& entry : lex) {
    if (entry.size() > lower_tokens.size()) continue;
    for (std::size_t i = 0; i + entry.size() <= lower_tokens.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < entry.size(); ++k)
        if (lower_tokens[i + k] != entry[k]) {
          match = false;
          break;
        }
      if (match) ++hits;
    }
  }
  return hits;
}

}  // namespace c3
