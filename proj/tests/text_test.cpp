// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "kgp/text.hpp"

using namespace kgp;

namespace {

// Plain recursive definition, independent of the rolling-row version.
std::size_t lev_slow(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::size_t skip_a = lev_slow(a.substr(1), b) + 1;
  std::size_t skip_b = lev_slow(a, b.substr(1)) + 1;
  std::size_t both = lev_slow(a.substr(1), b.substr(1)) + (a[0] != b[0]);
  return std::min({skip_a, skip_b, both});
}

}  // namespace

TEST_CASE("tokenize_ws splits on any whitespace and keeps punctuation") {
  CHECK(tokenize_ws("a b  c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize_ws("one\ttwo\nthree") ==
        std::vector<std::string>{"one", "two", "three"});
  CHECK(tokenize_ws("  padded  ") == std::vector<std::string>{"padded"});
  CHECK(tokenize_ws("Hello, world!") ==
        std::vector<std::string>{"Hello,", "world!"});
  CHECK(tokenize_ws("").empty());
  CHECK(tokenize_ws(" \t\n ").empty());
}

TEST_CASE("normalize_term lowercases and trims outer punctuation") {
  CHECK(normalize_term("Hello,") == "hello");
  CHECK(normalize_term("'Quoted!'") == "quoted");
  CHECK(normalize_term("O'Brien") == "o'brien");
  CHECK(normalize_term("half-baked") == "half-baked");
  CHECK(normalize_term("(1941)") == "1941");
  CHECK(normalize_term("...") == "");
  CHECK(normalize_term("") == "");
}

TEST_CASE("terms composes tokenize and normalize, dropping empties") {
  CHECK(terms("The cat -- sat.") ==
        std::vector<std::string>{"the", "cat", "sat"});
  CHECK(terms("??? !!!").empty());
}

TEST_CASE("stopwords include the articles and skip content words") {
  CHECK(is_stopword("the"));
  CHECK(is_stopword("a"));
  CHECK(is_stopword("an"));
  CHECK(is_stopword("of"));
  CHECK_FALSE(is_stopword("ohio"));
  CHECK_FALSE(is_stopword("1941"));
  CHECK(content_terms("The capital of Ohio is Columbus.") ==
        std::vector<std::string>{"capital", "ohio", "columbus"});
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("ends_sentence strips trailing quotes and brackets first") {
  CHECK(ends_sentence("done."));
  CHECK(ends_sentence("what?"));
  CHECK(ends_sentence("now!"));
  CHECK(ends_sentence("said.\""));
  CHECK(ends_sentence("etc.)"));
  CHECK_FALSE(ends_sentence("done"));
  CHECK_FALSE(ends_sentence("Mr"));
  CHECK_FALSE(ends_sentence(""));
  CHECK_FALSE(ends_sentence("\"quote"));
}

TEST_CASE("levenshtein matches the classic pairs") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("same", "same") == 0);
}

TEST_CASE("levenshtein agrees with a recursive definition on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<int> ch(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::string a, b;
    for (int i = len(rng); i > 0; --i) a.push_back('a' + ch(rng));
    for (int i = len(rng); i > 0; --i) b.push_back('a' + ch(rng));
    CAPTURE(a);
    CAPTURE(b);
    CHECK(levenshtein(a, b) == lev_slow(a, b));
  }
}

TEST_CASE("edit_similarity normalizes by the longer string") {
  CHECK(edit_similarity("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
  CHECK(edit_similarity("", "") == 1.0);
  CHECK(edit_similarity("", "abc") == 0.0);
  CHECK(edit_similarity("abc", "abc") == 1.0);
}

TEST_CASE("join and lowercase") {
  CHECK(join({"a", "b", "c"}) == "a b c");
  CHECK(join({"a"}, ", ") == "a");
  CHECK(join({}) == "");
  CHECK(lowercase("MiXeD 123") == "mixed 123");
}
