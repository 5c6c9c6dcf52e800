// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kgp {

// Whitespace tokenizer. Keeps punctuation attached to tokens.
std::vector<std::string> tokenize_ws(std::string_view text);

// Lowercases and strips leading/trailing non-alphanumeric characters.
// Returns "" when nothing alphanumeric remains.
std::string normalize_term(std::string_view token);

// tokenize_ws + normalize_term, empty results dropped.
std::vector<std::string> terms(std::string_view text);

using StopwordSet = std::set<std::string>;

const StopwordSet& default_stopwords();

bool is_stopword(const std::string& term,
                 const StopwordSet& stopwords = default_stopwords());

// Normalized non-stopword terms of a text.
std::vector<std::string> content_terms(
    std::string_view text, const StopwordSet& stopwords = default_stopwords());

// FNV-1a 64-bit hash. Used instead of std::hash so hashed features are
// stable across compilers and runs.
std::uint64_t fnv1a64(std::string_view s);

// True when a token ends a sentence: after trailing quotes/brackets are
// stripped the last char is one of . ! ?
bool ends_sentence(std::string_view token);

std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - dist/max(len). Both empty -> 1.
double edit_similarity(std::string_view a, std::string_view b);

std::string join(const std::vector<std::string>& parts,
                 std::string_view sep = " ");

std::string lowercase(std::string_view s);

}  // namespace kgp
