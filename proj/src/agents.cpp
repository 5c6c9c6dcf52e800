// SPDX-License-Identifier: Apache-2.0
#include "kgp/agents.hpp"

#include <algorithm>
#include <cmath>

#include "kgp/errors.hpp"

namespace kgp {

const char* const kEvidenceInstruction =
    "What evidence do we need to answer the question given the current "
    "evidence?";

TfIdfVectorizer::TfIdfVectorizer(const KnowledgeGraph& g,
                                 const StopwordSet& stopwords)
    : stopwords_(stopwords) {
  for (const auto& n : g.nodes()) {
    if (n.kind != NodeKind::passage) continue;
    n_passages_ += 1.0;
    std::set<std::string> seen;
    for (auto& t : content_terms(n.feature, stopwords_)) seen.insert(std::move(t));
    for (const auto& t : seen) ++df_[t];
  }
}

std::map<std::string, double> TfIdfVectorizer::vectorize(
    const std::string& text) const {
  std::map<std::string, int> tf;
  for (auto& t : content_terms(text, stopwords_)) ++tf[t];
  std::map<std::string, double> out;
  for (const auto& [term, count] : tf) {
    auto it = df_.find(term);
    double df = it == df_.end() ? 1.0 : static_cast<double>(it->second);
    double n = std::max(n_passages_, 1.0);
    out[term] = static_cast<double>(count) * std::log(n / df);
  }
  return out;
}

double TfIdfVectorizer::similarity(const std::string& a,
                                   const std::string& b) const {
  auto va = vectorize(a);
  auto vb = vectorize(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : va) {
    na += w * w;
    auto it = vb.find(t);
    if (it != vb.end()) dot += w * it->second;
  }
  for (const auto& [_, w] : vb) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

TfIdfCosineMatcher::TfIdfCosineMatcher(const KnowledgeGraph& g)
    : vectorizer_(g) {}

std::vector<double> TfIdfCosineMatcher::score_all(
    const std::vector<std::string>& features, const std::string& evidence) {
  std::vector<double> out(features.size());
  const int n = static_cast<int>(features.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        vectorizer_.similarity(evidence, features[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> EditMatcher::score_all(
    const std::vector<std::string>& features, const std::string& evidence) {
  std::vector<double> out(features.size());
  const int n = static_cast<int>(features.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        edit_similarity(evidence, features[static_cast<std::size_t>(i)]);
  }
  return out;
}

InnerProductMatcher::InnerProductMatcher(EmbeddingProvider& provider)
    : provider_(provider) {}

std::vector<double> InnerProductMatcher::score_all(
    const std::vector<std::string>& features, const std::string& evidence) {
  // One batched call for everything missing from the cache.
  std::vector<std::string> missing;
  if (!evidence.empty() && !cache_.count(evidence)) missing.push_back(evidence);
  for (const auto& f : features) {
    if (!f.empty() && !cache_.count(f)) missing.push_back(f);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  if (!missing.empty()) {
    std::vector<Vector> vecs = provider_.embed(missing);
    for (std::size_t i = 0; i < missing.size(); ++i)
      cache_[missing[i]] = std::move(vecs[i]);
  }
  Vector zero(static_cast<std::size_t>(provider_.dimension()), 0.0);
  const Vector& ev = evidence.empty() ? zero : cache_.at(evidence);
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& f : features) {
    out.push_back(f.empty() ? 0.0 : dot(ev, cache_.at(f)));
  }
  return out;
}

OracleAgent::OracleAgent(std::vector<std::string> gold_texts)
    : gold_texts_(std::move(gold_texts)) {}

std::string OracleAgent::generate_evidence(
    const Question&, const std::vector<std::string>& visited_texts) {
  for (const auto& gold : gold_texts_) {
    if (std::find(visited_texts.begin(), visited_texts.end(), gold) ==
        visited_texts.end()) {
      return gold;
    }
  }
  return "";
}

std::vector<double> OracleAgent::score_candidates(
    const std::vector<std::string>& features, const std::string& evidence) {
  std::vector<double> out(features.size(), 0.0);
  if (evidence.empty()) return out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] == evidence) out[i] = 1.0;
  }
  return out;
}

TfIdfAgent::TfIdfAgent(std::unique_ptr<Matcher> matcher)
    : matcher_(std::move(matcher)) {
  if (!matcher_) throw InputError("agent needs a matcher");
}

TfIdfAgent::TfIdfAgent(const KnowledgeGraph& g)
    : matcher_(std::make_unique<TfIdfCosineMatcher>(g)) {}

std::string TfIdfAgent::generate_evidence(const Question& q,
                                          const std::vector<std::string>&) {
  return q.text;
}

std::vector<double> TfIdfAgent::score_candidates(
    const std::vector<std::string>& features, const std::string& evidence) {
  return matcher_->score_all(features, evidence);
}

RemoteLLMAgent::RemoteLLMAgent(CompletionClient client,
                               std::unique_ptr<Matcher> matcher,
                               std::string instruction, int max_tokens)
    : client_(std::move(client)),
      matcher_(std::move(matcher)),
      instruction_(std::move(instruction)),
      max_tokens_(max_tokens) {
  if (!matcher_) throw InputError("agent needs a matcher");
}

std::string RemoteLLMAgent::generate_evidence(
    const Question& q, const std::vector<std::string>& visited_texts) {
  std::string prompt = instruction_;
  prompt += "\nQuestion: " + q.text + "\nCurrent evidence:\n";
  if (visited_texts.empty()) {
    prompt += "(none)\n";
  } else {
    for (const auto& v : visited_texts) prompt += "- " + v + "\n";
  }
  prompt += "Next evidence:";
  return client_.generate(prompt, max_tokens_);
}

std::vector<double> RemoteLLMAgent::score_candidates(
    const std::vector<std::string>& features, const std::string& evidence) {
  return matcher_->score_all(features, evidence);
}

std::unique_ptr<Matcher> make_text_matcher(const KnowledgeGraph& g,
                                           TextScore score) {
  if (score == TextScore::edit) return std::make_unique<EditMatcher>();
  return std::make_unique<TfIdfCosineMatcher>(g);
}

std::unique_ptr<Matcher> make_encoder_matcher(EmbeddingProvider& provider) {
  return std::make_unique<InnerProductMatcher>(provider);
}

}  // namespace kgp
