// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgp/corpus.hpp"
#include "kgp/embed.hpp"
#include "kgp/text.hpp"

namespace kgp {

struct RankedPassages {
  std::vector<std::pair<std::string, double>> ranked;  // (passage_id, score)
  bool fallback = false;   // no question term matched; lexicographic order
  bool truncated = false;  // top_n asked for more passages than exist
};

// Okapi BM25 (k1 = 1.2, b = 0.75, idf = ln((N-df+0.5)/(df+0.5) + 1)).
RankedPassages bm25_retrieve(const std::vector<Passage>& passages,
                             const std::string& question, int top_n,
                             const StopwordSet& stopwords = default_stopwords());

// Sum over question terms of tf * ln(N/df).
RankedPassages tfidf_retrieve(const std::vector<Passage>& passages,
                              const std::string& question, int top_n,
                              const StopwordSet& stopwords = default_stopwords());

// Cosine ranking of the embedded question against passage embeddings.
// With blend on, half the slots come from the embedding ranking and the
// rest from a normalized edit-distance ranking over passage texts.
RankedPassages knn_retrieve(const EmbeddingMap& embeddings,
                            const std::string& question,
                            EmbeddingProvider& provider, int top_n,
                            bool blend = false,
                            const std::map<std::string, std::string>* texts = nullptr);

}  // namespace kgp
