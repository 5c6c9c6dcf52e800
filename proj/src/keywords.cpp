// SPDX-License-Identifier: Apache-2.0
#include "kgp/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kgp/errors.hpp"

namespace kgp {

KeywordIndex extract_keywords(const Corpus& corpus, int m,
                              const StopwordSet& stopwords) {
  if (m < 1) throw InputError("keyword count m must be >= 1");
  if (corpus.documents.empty() || corpus.passages.empty())
    throw EmptyCorpusError("keyword extraction needs a split, non-empty corpus");

  const std::size_t nd = corpus.documents.size();

  // Term frequencies per document, document text = its passages.
  std::vector<std::unordered_map<std::string, int>> tf(nd);
  std::unordered_map<std::string, std::size_t> doc_index;
  for (std::size_t i = 0; i < nd; ++i) doc_index[corpus.documents[i].doc_id] = i;
  for (const auto& p : corpus.passages) {
    auto it = doc_index.find(p.doc_id);
    if (it == doc_index.end())
      throw InconsistentInputError("passage " + p.passage_id +
                                   " references unknown document " + p.doc_id);
    for (auto& t : content_terms(p.text, stopwords)) ++tf[it->second][t];
  }

  std::unordered_map<std::string, int> df;
  for (const auto& t : tf) {
    for (const auto& [term, _] : t) ++df[term];
  }

  KeywordIndex index;
  index.m = m;
  const double n_docs = static_cast<double>(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(tf[i].size());
    for (const auto& [term, count] : tf[i]) {
      int d = df[term];
      if (static_cast<std::size_t>(d) == nd) continue;  // idf would be 0
      double idf = std::log(n_docs / static_cast<double>(d));
      scored.emplace_back(static_cast<double>(count) * idf, term);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (scored.size() > static_cast<std::size_t>(m))
      scored.resize(static_cast<std::size_t>(m));

    std::set<std::string> kws;
    for (const auto& [_, term] : scored) kws.insert(term);
    // Title terms join the keyword set unconditionally.
    for (const auto& t : terms(corpus.documents[i].title)) kws.insert(t);
    index.keyword_space.insert(kws.begin(), kws.end());
    index.per_document_keywords[corpus.documents[i].doc_id] = std::move(kws);
  }

  for (const auto& p : corpus.passages) {
    std::set<std::string> pk;
    for (const auto& t : terms(p.text)) {
      if (index.keyword_space.count(t)) pk.insert(t);
    }
    index.per_passage_keywords[p.passage_id] = std::move(pk);
  }
  return index;
}

}  // namespace kgp
