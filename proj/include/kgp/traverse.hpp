// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "kgp/graph.hpp"
#include "kgp/text.hpp"

namespace kgp {

class Agent;
class CompletionClient;

enum class QuestionKind { content, structural };
enum class StructKind { page, table };

struct StructureRef {
  StructKind kind = StructKind::page;
  int ordinal = 0;

  bool operator==(const StructureRef&) const = default;
};

struct Question {
  std::string text;
  QuestionKind kind = QuestionKind::content;
  std::vector<StructureRef> refs;  // in order of appearance
};

struct TraversalConfig {
  int budget_K = 30;
  int branching = 3;
  int seed_count = 10;
  int max_hops = 2;

  void validate() const;
};

struct ReasoningPath {
  std::vector<std::string> node_ids;
  // Evidence string used to choose each extension; size = hops taken.
  std::vector<std::string> evidence;
};

struct RetrievalResult {
  std::vector<ReasoningPath> paths;
  std::vector<std::string> context_passages;  // node ids, first-visited order
  std::vector<std::string> context_texts;     // aligned passage texts
  std::vector<std::string> structural_payloads;
  bool seed_fallback = false;
  // Budget was not spent: the queues drained first.
  bool budget_shortfall = false;
};

struct SeedResult {
  std::vector<std::string> ids;
  bool fallback = false;  // no question term matched any passage
};

// TF-IDF scoring of passages against the question; ties by ascending id.
// When every score is zero, returns the lexicographically first passages
// with the fallback flag set.
SeedResult seed_search(const KnowledgeGraph& g, const std::string& question,
                       int seed_count,
                       const StopwordSet& stopwords = default_stopwords());

struct RankedCandidates {
  std::vector<std::pair<std::string, double>> ranked;  // (id, score)
  std::string evidence;
};

// Scores the candidates that are not already on the path against the
// agent's generated evidence and returns the top_b best, ties broken by
// ascending node id.
RankedCandidates rank_neighbors(const KnowledgeGraph& g, const Question& q,
                                const ReasoningPath& path,
                                const std::vector<std::string>& candidates,
                                Agent& agent, int top_b);

// Budgeted agent-guided traversal: seeds start singleton paths, each
// dequeued path is extended with its best-ranked unvisited neighbors,
// and every enqueue spends one unit of budget_K (seeds included).
RetrievalResult retrieve(const KnowledgeGraph& g, const Question& q,
                         Agent& agent, const TraversalConfig& config = {});

// Pattern-based routing: "page N"/"table N" mentions make the question
// structural. A remote classifier, when given, can override the label
// (never the refs); on failure it falls back to the pattern with a
// warning on stderr.
Question classify_question(const std::string& text,
                           const CompletionClient* remote = nullptr);

// Returns table markdown / contained passage texts for every structure
// reference, in reference order.
RetrievalResult retrieve_structural(const KnowledgeGraph& g,
                                    const Question& q);

enum class PromptMode { with_context, no_context };

// Renders the answer prompt. A non-empty custom template replaces the
// built-in ones; {question} and {context} are substituted.
std::string format_prompt(const Question& q, const RetrievalResult& result,
                          PromptMode mode = PromptMode::with_context,
                          const std::string& custom_template = "");

}  // namespace kgp
