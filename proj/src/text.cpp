// SPDX-License-Identifier: Apache-2.0
#include "kgp/text.hpp"

#include <algorithm>
#include <cctype>

namespace kgp {

namespace {

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

std::vector<std::string> tokenize_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::string normalize_term(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && !is_alnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !is_alnum(static_cast<unsigned char>(token[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    out.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(token[i]))));
  }
  return out;
}

std::vector<std::string> terms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize_ws(text)) {
    std::string t = normalize_term(tok);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet kStopwords = {
      "a",       "about",   "above",  "after",   "again",   "against",
      "all",     "am",      "an",     "and",     "any",     "are",
      "as",      "at",      "be",     "because", "been",    "before",
      "being",   "below",   "between", "both",   "but",     "by",
      "can",     "could",   "did",    "do",      "does",    "doing",
      "down",    "during",  "each",   "few",     "for",     "from",
      "further", "had",     "has",    "have",    "having",  "he",
      "her",     "here",    "hers",   "herself", "him",     "himself",
      "his",     "how",     "i",      "if",      "in",      "into",
      "is",      "it",      "its",    "itself",  "just",    "me",
      "more",    "most",    "my",     "myself",  "no",      "nor",
      "not",     "now",     "of",     "off",     "on",      "once",
      "only",    "or",      "other",  "our",     "ours",    "ourselves",
      "out",     "over",    "own",    "same",    "she",     "should",
      "so",      "some",    "such",   "than",    "that",    "the",
      "their",   "theirs",  "them",   "themselves", "then", "there",
      "these",   "they",    "this",   "those",   "through", "to",
      "too",     "under",   "until",  "up",      "very",    "was",
      "we",      "were",    "what",   "when",    "where",   "which",
      "while",   "who",     "whom",   "why",     "will",    "with",
      "would",   "you",     "your",   "yours",   "yourself", "yourselves",
  };
  return kStopwords;
}

bool is_stopword(const std::string& term, const StopwordSet& stopwords) {
  return stopwords.count(term) > 0;
}

std::vector<std::string> content_terms(std::string_view text,
                                       const StopwordSet& stopwords) {
  std::vector<std::string> out;
  for (auto& t : terms(text)) {
    if (!is_stopword(t, stopwords)) out.push_back(std::move(t));
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool ends_sentence(std::string_view token) {
  std::size_t e = token.size();
  while (e > 0) {
    char c = token[e - 1];
    if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
      --e;
    } else {
      break;
    }
  }
  if (e == 0) return false;
  char c = token[e - 1];
  return c == '.' || c == '!' || c == '?';
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t cur = row[j];
      std::size_t sub = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
      prev = cur;
    }
  }
  return row[b.size()];
}

double edit_similarity(std::string_view a, std::string_view b) {
  std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(m);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace kgp
