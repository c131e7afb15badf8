#include "doctest.h"

#include "c3/tokenize.hpp"

using c3::tokenize;

TEST_CASE("words, punctuation and sentences on a plain two-sentence text") {
  const auto t = tokenize("I agree. Totally.");
  CHECK(t.word_tokens == std::vector<std::string>{"I", "agree", "Totally"});
  CHECK(t.punct_tokens == std::vector<std::string>{".", "."});
  REQUIRE(t.sentence_count() == 2);
  CHECK(t.sentences[0].begin == 0);
  CHECK(t.sentences[0].end == 2);
  CHECK(t.sentences[1].begin == 2);
  CHECK(t.sentences[1].end == 3);
}

TEST_CASE("empty text") {
  const auto t = tokenize("");
  CHECK(t.word_count() == 0);
  CHECK(t.sentence_count() == 0);
  CHECK(t.punct_tokens.empty());
}

TEST_CASE("abbreviation periods do not split when no capital follows") {
  const auto t = tokenize("e.g. test");
  CHECK(t.sentence_count() == 1);
  CHECK(t.word_tokens == std::vector<std::string>{"e", "g", "test"});
}

TEST_CASE("boundary needs whitespace plus uppercase") {
  CHECK(tokenize("Stop! Now").sentence_count() == 2);
  CHECK(tokenize("Stop! now").sentence_count() == 1);
  CHECK(tokenize("Stop!Now").sentence_count() == 1);
  CHECK(tokenize("Is it? Yes.").sentence_count() == 2);
}

TEST_CASE("text without a terminator is one sentence") {
  const auto t = tokenize("no terminator here");
  REQUIRE(t.sentence_count() == 1);
  CHECK(t.sentences[0].begin == 0);
  CHECK(t.sentences[0].end == 3);
}

TEST_CASE("internal apostrophes and hyphens stay inside tokens") {
  const auto t = tokenize("It's a well-known fact - truly.");
  CHECK(t.word_tokens ==
        std::vector<std::string>{"It's", "a", "well-known", "fact", "truly"});
  // the dash surrounded by spaces is punctuation, plus the final period
  CHECK(t.punct_tokens == std::vector<std::string>{"-", "."});
}

TEST_CASE("each punctuation character is its own token") {
  const auto t = tokenize("GREAT!!! ok?!");
  CHECK(t.punct_tokens == std::vector<std::string>{"!", "!", "!", "?", "!"});
}

TEST_CASE("sentence spans partition the word tokens in order") {
  const auto t = tokenize("One two. Three four five! Six?");
  REQUIRE(t.sentence_count() == 3);
  std::size_t expect_begin = 0;
  for (const auto& s : t.sentences) {
    CHECK(s.begin == expect_begin);
    CHECK(s.end > s.begin);
    expect_begin = s.end;
  }
  CHECK(expect_begin == t.word_count());
}

TEST_CASE("punctuation-only text has no words and no sentences") {
  const auto t = tokenize("!!! ...");
  CHECK(t.word_count() == 0);
  CHECK(t.sentence_count() == 0);
  CHECK(t.punct_tokens.size() == 6);
}

TEST_CASE("utf-8 bytes stay inside word tokens") {
  const auto t = tokenize("café déjà vu");
  CHECK(t.word_count() == 3);
  CHECK(t.word_tokens[0] == "café");
}

TEST_CASE("digits are word characters") {
  const auto t = tokenize("in 2016 the 2nd quarter");
  CHECK(t.word_tokens ==
        std::vector<std::string>{"in", "2016", "the", "2nd", "quarter"});
}
