#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace c3 {

// Half-open word-token index range [begin, end).
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct TokenizedComment {
  std::vector<std::string> word_tokens;
  std::vector<std::string> punct_tokens;
  std::vector<SentenceSpan> sentences;

  std::size_t word_count() const { return word_tokens.size(); }
  std::size_t sentence_count() const { return sentences.size(); }
};

namespace detail {

inline bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Non-ASCII bytes are treated as word characters so accented and other
// multi-byte letters stay inside their token.
inline bool is_word_char(unsigned char c) {
  return is_ascii_alnum(c) || c >= 0x80;
}

inline bool is_space_char(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_upper_ascii(unsigned char c) { return c >= 'A' && c <= 'Z'; }

}  // namespace detail

// Deterministic tokenizer.
//   Word tokens: maximal alphanumeric runs, with apostrophes and hyphens kept
//     when flanked by word characters on both sides ("don't", "well-known").
//   Punct tokens: one token per non-space, non-word character ("!!!" is three).
//   Sentences: split after '.', '!' or '?' when followed by whitespace and an
//     uppercase letter, or at end of text. Text without a terminator is one
//     sentence. Sentences that contain no word token are dropped, so the
//     spans partition the word tokens in order.
inline TokenizedComment tokenize(const std::string& text) {
  TokenizedComment out;
  const std::size_t n = text.size();
  std::size_t sentence_begin = 0;  // word index where the open sentence started

  auto close_sentence = [&] {
    if (out.word_tokens.size() > sentence_begin) {
      out.sentences.push_back({sentence_begin, out.word_tokens.size()});
      sentence_begin = out.word_tokens.size();
    }
  };

  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (detail::is_word_char(c)) {
      std::size_t j = i;
      std::string tok;
      while (j < n) {
        const unsigned char w = static_cast<unsigned char>(text[j]);
        if (detail::is_word_char(w)) {
          tok.push_back(static_cast<char>(w));
          ++j;
        } else if ((w == '\'' || w == '-') && j + 1 < n &&
                   detail::is_word_char(static_cast<unsigned char>(text[j + 1])) &&
                   !tok.empty()) {
          tok.push_back(static_cast<char>(w));
          ++j;
        } else {
          break;
        }
      }
      out.word_tokens.push_back(tok);
      i = j;
      continue;
    }
    if (detail::is_space_char(c)) {
      ++i;
      continue;
    }
    out.punct_tokens.push_back(std::string(1, static_cast<char>(c)));
    if (c == '.' || c == '!' || c == '?') {
      // Boundary if followed by whitespace then an uppercase letter, or if
      // nothing but whitespace/terminators remain.
      std::size_t j = i + 1;
      bool saw_space = false;
      while (j < n && detail::is_space_char(static_cast<unsigned char>(text[j]))) {
        saw_space = true;
        ++j;
      }
      if (j >= n) {
        close_sentence();
      } else if (saw_space && detail::is_upper_ascii(static_cast<unsigned char>(text[j]))) {
        close_sentence();
      }
    }
    ++i;
  }
  close_sentence();
  return out;
}

// Word-token count; the cached comment length used throughout.
inline std::size_t token_length(const std::string& text) {
  return tokenize(text).word_tokens.size();
}

}  // namespace c3
