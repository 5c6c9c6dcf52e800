// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>

#include "kgp/corpus.hpp"
#include "kgp/text.hpp"

namespace kgp {

struct KeywordIndex {
  int m = 0;
  std::set<std::string> keyword_space;
  // document id -> its extracted keywords (top-m tf-idf terms plus the
  // document title terms, which bypass the stopword and tf-idf filters).
  std::map<std::string, std::set<std::string>> per_document_keywords;
  // passage id -> terms of the passage that lie in keyword_space.
  std::map<std::string, std::set<std::string>> per_passage_keywords;
};

// Per-document tf-idf keyword extraction over a split corpus.
// idf(t) = ln(N / df(t)) with df counted over documents; terms present in
// every document are dropped. Top m terms per document are kept, ranked
// by score descending with ties broken alphabetically.
KeywordIndex extract_keywords(const Corpus& corpus, int m = 20,
                              const StopwordSet& stopwords = default_stopwords());

}  // namespace kgp
