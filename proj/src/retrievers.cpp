// SPDX-License-Identifier: Apache-2.0
#include "kgp/retrievers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "kgp/errors.hpp"

namespace kgp {

namespace {

struct ScoredCorpus {
  std::vector<std::string> ids;
  std::vector<double> scores;
};

RankedPassages finalize(const std::vector<std::string>& ids,
                        const std::vector<double>& scores, int top_n) {
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });

  RankedPassages out;
  bool all_zero = scores[order[0]] == 0.0;
  if (all_zero) {
    out.fallback = true;
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& id : sorted) out.ranked.emplace_back(id, 0.0);
  } else {
    for (std::size_t i : order) out.ranked.emplace_back(ids[i], scores[i]);
  }
  if (static_cast<std::size_t>(top_n) >= out.ranked.size()) {
    out.truncated = true;
  } else {
    out.ranked.resize(static_cast<std::size_t>(top_n));
  }
  return out;
}

int passage_length(const Passage& p) {
  if (p.token_count > 0) return p.token_count;
  return static_cast<int>(tokenize_ws(p.text).size());
}

std::vector<std::string> unique_question_terms(const std::string& question,
                                               const StopwordSet& stopwords) {
  std::vector<std::string> qterms = content_terms(question, stopwords);
  std::sort(qterms.begin(), qterms.end());
  qterms.erase(std::unique(qterms.begin(), qterms.end()), qterms.end());
  return qterms;
}

}  // namespace

RankedPassages bm25_retrieve(const std::vector<Passage>& passages,
                             const std::string& question, int top_n,
                             const StopwordSet& stopwords) {
  if (passages.empty()) throw InputError("passage list is empty");
  if (top_n < 1) throw InputError("top_n must be >= 1");
  const double k1 = 1.2;
  const double b = 0.75;
  const double n = static_cast<double>(passages.size());

  std::vector<std::string> qterms = unique_question_terms(question, stopwords);

  double total_len = 0.0;
  std::vector<std::unordered_map<std::string, int>> tf(passages.size());
  std::vector<int> lens(passages.size());
  for (std::size_t i = 0; i < passages.size(); ++i) {
    lens[i] = passage_length(passages[i]);
    total_len += lens[i];
    for (auto& t : terms(passages[i].text)) ++tf[i][t];
  }
  const double avgdl = total_len / n;

  std::unordered_map<std::string, int> df;
  for (const auto& t : qterms) {
    int d = 0;
    for (const auto& m : tf) {
      if (m.count(t)) ++d;
    }
    df[t] = d;
  }

  std::vector<std::string> ids;
  std::vector<double> scores;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    double s = 0.0;
    for (const auto& t : qterms) {
      auto it = tf[i].find(t);
      if (it == tf[i].end()) continue;
      double freq = it->second;
      double idf = std::log((n - df[t] + 0.5) / (df[t] + 0.5) + 1.0);
      double denom = freq + k1 * (1.0 - b + b * lens[i] / avgdl);
      s += idf * freq * (k1 + 1.0) / denom;
    }
    ids.push_back(passages[i].passage_id);
    scores.push_back(s);
  }
  return finalize(ids, scores, top_n);
}

RankedPassages tfidf_retrieve(const std::vector<Passage>& passages,
                              const std::string& question, int top_n,
                              const StopwordSet& stopwords) {
  if (passages.empty()) throw InputError("passage list is empty");
  if (top_n < 1) throw InputError("top_n must be >= 1");
  const double n = static_cast<double>(passages.size());

  std::vector<std::string> qterms = unique_question_terms(question, stopwords);

  std::vector<std::unordered_map<std::string, int>> tf(passages.size());
  for (std::size_t i = 0; i < passages.size(); ++i) {
    for (auto& t : terms(passages[i].text)) ++tf[i][t];
  }
  std::unordered_map<std::string, int> df;
  for (const auto& t : qterms) {
    int d = 0;
    for (const auto& m : tf) {
      if (m.count(t)) ++d;
    }
    df[t] = d;
  }

  std::vector<std::string> ids;
  std::vector<double> scores;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    double s = 0.0;
    for (const auto& t : qterms) {
      if (df[t] == 0) continue;
      auto it = tf[i].find(t);
      if (it == tf[i].end()) continue;
      s += it->second * std::log(n / df[t]);
    }
    ids.push_back(passages[i].passage_id);
    scores.push_back(s);
  }
  return finalize(ids, scores, top_n);
}

RankedPassages knn_retrieve(const EmbeddingMap& embeddings,
                            const std::string& question,
                            EmbeddingProvider& provider, int top_n, bool blend,
                            const std::map<std::string, std::string>* texts) {
  if (embeddings.empty()) throw InputError("embedding map is empty");
  if (top_n < 1) throw InputError("top_n must be >= 1");
  if (blend && !texts)
    throw InputError("blended ranking needs passage texts");

  Vector qv = provider.embed_one(question);
  std::vector<std::pair<std::string, double>> by_cosine;
  for (const auto& [id, v] : embeddings) {
    by_cosine.emplace_back(id, cosine(qv, v));
  }
  std::sort(by_cosine.begin(), by_cosine.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });

  RankedPassages out;
  const std::size_t total = by_cosine.size();
  const std::size_t want = std::min(static_cast<std::size_t>(top_n), total);
  out.truncated = static_cast<std::size_t>(top_n) >= total;

  if (!blend) {
    out.ranked.assign(by_cosine.begin(),
                      by_cosine.begin() + static_cast<std::ptrdiff_t>(want));
    return out;
  }

  // Half the slots by embedding similarity, the rest by edit similarity.
  const std::size_t emb_slots = (want + 1) / 2;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < emb_slots; ++i) {
    out.ranked.push_back(by_cosine[i]);
    taken.insert(by_cosine[i].first);
  }
  std::vector<std::pair<std::string, double>> by_edit;
  for (const auto& [id, _] : embeddings) {
    auto it = texts->find(id);
    if (it == texts->end())
      throw InconsistentInputError("no text for passage " + id);
    by_edit.emplace_back(id, edit_similarity(question, it->second));
  }
  std::sort(by_edit.begin(), by_edit.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& e : by_edit) {
    if (out.ranked.size() >= want) break;
    if (taken.count(e.first)) continue;
    out.ranked.push_back(e);
  }
  return out;
}

}  // namespace kgp
