// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kgp/embed.hpp"
#include "kgp/graph.hpp"
#include "kgp/remote.hpp"
#include "kgp/traverse.hpp"

namespace kgp {

// Traversal guide. generate_evidence says what to look for next given
// the question and the passages already on the path; score_candidates
// rates candidate passages against that evidence.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual std::string generate_evidence(
      const Question& q, const std::vector<std::string>& visited_texts) = 0;
  virtual std::vector<double> score_candidates(
      const std::vector<std::string>& features, const std::string& evidence) = 0;
};

// Candidate scoring strategy shared by the non-oracle agents.
class Matcher {
 public:
  virtual ~Matcher() = default;
  virtual std::vector<double> score_all(const std::vector<std::string>& features,
                                        const std::string& evidence) = 0;
};

// TF-IDF weighted bag-of-words vectors with df taken from the graph's
// passages. Unseen terms get df = 1.
class TfIdfVectorizer {
 public:
  explicit TfIdfVectorizer(const KnowledgeGraph& g,
                           const StopwordSet& stopwords = default_stopwords());
  std::map<std::string, double> vectorize(const std::string& text) const;
  double similarity(const std::string& a, const std::string& b) const;

 private:
  std::map<std::string, int> df_;
  double n_passages_ = 0.0;
  StopwordSet stopwords_;
};

class TfIdfCosineMatcher : public Matcher {
 public:
  explicit TfIdfCosineMatcher(const KnowledgeGraph& g);
  std::vector<double> score_all(const std::vector<std::string>& features,
                                const std::string& evidence) override;

 private:
  TfIdfVectorizer vectorizer_;
};

// Normalized edit-distance similarity.
class EditMatcher : public Matcher {
 public:
  std::vector<double> score_all(const std::vector<std::string>& features,
                                const std::string& evidence) override;
};

// Inner product of provider embeddings; evidence and feature embeddings
// are cached so repeated ranking steps reuse them.
class InnerProductMatcher : public Matcher {
 public:
  explicit InnerProductMatcher(EmbeddingProvider& provider);
  std::vector<double> score_all(const std::vector<std::string>& features,
                                const std::string& evidence) override;

 private:
  EmbeddingProvider& provider_;
  std::map<std::string, Vector> cache_;
};

// Replays a known gold chain: the evidence is the next gold passage text
// not yet visited, and only an exact feature match scores 1.
class OracleAgent : public Agent {
 public:
  explicit OracleAgent(std::vector<std::string> gold_texts);
  std::string name() const override { return "oracle"; }
  std::string generate_evidence(
      const Question& q, const std::vector<std::string>& visited_texts) override;
  std::vector<double> score_candidates(const std::vector<std::string>& features,
                                       const std::string& evidence) override;

 private:
  std::vector<std::string> gold_texts_;
};

// Evidence is the question itself.
class TfIdfAgent : public Agent {
 public:
  explicit TfIdfAgent(std::unique_ptr<Matcher> matcher);
  explicit TfIdfAgent(const KnowledgeGraph& g);
  std::string name() const override { return "tfidf"; }
  std::string generate_evidence(
      const Question& q, const std::vector<std::string>& visited_texts) override;
  std::vector<double> score_candidates(const std::vector<std::string>& features,
                                       const std::string& evidence) override;

 private:
  std::unique_ptr<Matcher> matcher_;
};

extern const char* const kEvidenceInstruction;

// Asks a completion endpoint what evidence is needed next.
class RemoteLLMAgent : public Agent {
 public:
  RemoteLLMAgent(CompletionClient client, std::unique_ptr<Matcher> matcher,
                 std::string instruction = kEvidenceInstruction,
                 int max_tokens = 128);
  std::string name() const override { return "remote"; }
  std::string generate_evidence(
      const Question& q, const std::vector<std::string>& visited_texts) override;
  std::vector<double> score_candidates(const std::vector<std::string>& features,
                                       const std::string& evidence) override;

 private:
  CompletionClient client_;
  std::unique_ptr<Matcher> matcher_;
  std::string instruction_;
  int max_tokens_;
};

enum class MatchMode { text, encoder };
enum class TextScore { tfidf, edit };

std::unique_ptr<Matcher> make_text_matcher(const KnowledgeGraph& g,
                                           TextScore score = TextScore::tfidf);
std::unique_ptr<Matcher> make_encoder_matcher(EmbeddingProvider& provider);

}  // namespace kgp
