// SPDX-License-Identifier: Apache-2.0
#include "kgp/traverse.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <regex>
#include <set>
#include <unordered_map>

#include "kgp/agents.hpp"
#include "kgp/errors.hpp"
#include "kgp/remote.hpp"

namespace kgp {

void TraversalConfig::validate() const {
  if (budget_K < 1) throw InputError("budget_K must be >= 1");
  if (branching < 1) throw InputError("branching must be >= 1");
  if (seed_count < 1) throw InputError("seed_count must be >= 1");
  if (max_hops < 0) throw InputError("max_hops must be >= 0");
  if (seed_count > budget_K)
    throw InputError("seed_count must not exceed budget_K");
}

SeedResult seed_search(const KnowledgeGraph& g, const std::string& question,
                       int seed_count, const StopwordSet& stopwords) {
  if (seed_count < 1) throw InputError("seed_count must be >= 1");
  std::vector<const Node*> passages;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage) passages.push_back(&n);
  }
  if (passages.empty())
    throw EmptyGraphError("graph has no passage nodes to search");

  std::vector<std::string> qterms = content_terms(question, stopwords);
  std::sort(qterms.begin(), qterms.end());
  qterms.erase(std::unique(qterms.begin(), qterms.end()), qterms.end());

  const int np = static_cast<int>(passages.size());
  const std::size_t nt = qterms.size();
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(np),
                                       std::vector<int>(nt, 0));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i) {
    std::unordered_map<std::string, int> tf;
    for (auto& t : terms(passages[static_cast<std::size_t>(i)]->feature)) ++tf[t];
    for (std::size_t j = 0; j < nt; ++j) {
      auto it = tf.find(qterms[j]);
      if (it != tf.end()) counts[static_cast<std::size_t>(i)][j] = it->second;
    }
  }

  std::vector<int> df(nt, 0);
  for (int i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      if (counts[static_cast<std::size_t>(i)][j] > 0) ++df[j];
    }
  }

  std::vector<double> score(static_cast<std::size_t>(np), 0.0);
  for (int i = 0; i < np; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      if (df[j] == 0) continue;
      s += counts[static_cast<std::size_t>(i)][j] *
           std::log(static_cast<double>(np) / static_cast<double>(df[j]));
    }
    score[static_cast<std::size_t>(i)] = s;
  }

  std::vector<int> order(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (score[static_cast<std::size_t>(a)] != score[static_cast<std::size_t>(b)])
      return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    return passages[static_cast<std::size_t>(a)]->node_id <
           passages[static_cast<std::size_t>(b)]->node_id;
  });

  SeedResult out;
  const std::size_t take =
      std::min(static_cast<std::size_t>(seed_count), passages.size());
  if (score[static_cast<std::size_t>(order[0])] == 0.0) {
    // Nothing matched; fall back to the lexicographically first passages.
    std::vector<std::string> ids;
    for (const Node* p : passages) ids.push_back(p->node_id);
    std::sort(ids.begin(), ids.end());
    ids.resize(take);
    out.ids = std::move(ids);
    out.fallback = true;
    return out;
  }
  for (std::size_t i = 0; i < take; ++i) {
    out.ids.push_back(passages[static_cast<std::size_t>(order[i])]->node_id);
  }
  return out;
}

RankedCandidates rank_neighbors(const KnowledgeGraph& g, const Question& q,
                                const ReasoningPath& path,
                                const std::vector<std::string>& candidates,
                                Agent& agent, int top_b) {
  if (top_b < 1) throw InputError("top_b must be >= 1");
  if (candidates.empty()) throw InputError("candidate set is empty");

  std::vector<std::string> cands = candidates;
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::set<std::string> on_path(path.node_ids.begin(), path.node_ids.end());
  std::vector<std::string> fresh;
  for (const auto& id : cands) {
    g.node_index(id);  // IdError for unknown candidates
    if (!on_path.count(id)) fresh.push_back(id);
  }
  if (fresh.empty())
    throw ExhaustedCandidatesError(
        "every candidate is already on the path");

  std::vector<std::string> visited_texts;
  for (const auto& id : path.node_ids) visited_texts.push_back(g.node(id).feature);

  RankedCandidates out;
  out.evidence = agent.generate_evidence(q, visited_texts);

  std::vector<std::string> features;
  features.reserve(fresh.size());
  for (const auto& id : fresh) features.push_back(g.node(id).feature);
  std::vector<double> scores = agent.score_candidates(features, out.evidence);
  if (scores.size() != fresh.size())
    throw InputError("agent returned a mismatched score count");

  std::vector<std::size_t> order(fresh.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return fresh[a] < fresh[b];
  });
  const std::size_t take =
      std::min(static_cast<std::size_t>(top_b), fresh.size());
  for (std::size_t i = 0; i < take; ++i) {
    out.ranked.emplace_back(fresh[order[i]], scores[order[i]]);
  }
  return out;
}

RetrievalResult retrieve(const KnowledgeGraph& g, const Question& q,
                         Agent& agent, const TraversalConfig& config) {
  config.validate();
  if (q.kind != QuestionKind::content)
    throw InputError("retrieve handles content questions; "
                     "use retrieve_structural for structural ones");

  SeedResult seeds = seed_search(g, q.text, config.seed_count);

  RetrievalResult result;
  result.seed_fallback = seeds.fallback;

  std::deque<ReasoningPath> path_queue;
  std::deque<std::vector<std::string>> cand_queue;
  std::set<std::string> visited;
  int k = 0;

  auto visit = [&](const std::string& id) {
    if (visited.insert(id).second) {
      result.context_passages.push_back(id);
      result.context_texts.push_back(g.node(id).feature);
    }
  };

  for (const auto& id : seeds.ids) {
    path_queue.push_back(ReasoningPath{{id}, {}});
    cand_queue.push_back(g.similarity_neighbors(id));
    visit(id);
    ++k;
  }

  std::vector<ReasoningPath> leaves;
  bool budget_hit = k >= config.budget_K;
  while (!path_queue.empty() && !budget_hit) {
    ReasoningPath path = std::move(path_queue.front());
    path_queue.pop_front();
    std::vector<std::string> cands = std::move(cand_queue.front());
    cand_queue.pop_front();

    const int hops = static_cast<int>(path.node_ids.size()) - 1;
    if (hops >= config.max_hops || cands.empty()) {
      leaves.push_back(std::move(path));
      continue;
    }

    RankedCandidates ranked;
    try {
      ranked = rank_neighbors(g, q, path, cands, agent, config.branching);
    } catch (const ExhaustedCandidatesError&) {
      leaves.push_back(std::move(path));
      continue;
    }

    bool extended = false;
    for (const auto& [id, score] : ranked.ranked) {
      (void)score;
      if (k >= config.budget_K) {
        budget_hit = true;
        break;
      }
      ReasoningPath child = path;
      child.node_ids.push_back(id);
      child.evidence.push_back(ranked.evidence);
      cand_queue.push_back(g.similarity_neighbors(id));
      path_queue.push_back(std::move(child));
      visit(id);
      ++k;
      extended = true;
    }
    if (!extended) leaves.push_back(std::move(path));
  }
  for (auto& p : path_queue) leaves.push_back(std::move(p));

  result.paths = std::move(leaves);
  result.budget_shortfall = k < config.budget_K;
  return result;
}

Question classify_question(const std::string& text,
                           const CompletionClient* remote) {
  Question q;
  q.text = text;
  static const std::regex kRefPattern("(page|table)\\s+(\\d+)",
                                      std::regex::icase);
  auto begin = std::sregex_iterator(text.begin(), text.end(), kRefPattern);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    StructureRef ref;
    ref.kind = lowercase((*it)[1].str()) == "page" ? StructKind::page
                                                   : StructKind::table;
    try {
      ref.ordinal = std::stoi((*it)[2].str());
    } catch (const std::exception&) {
      continue;  // ordinal too large to be a real reference
    }
    q.refs.push_back(ref);
  }
  q.kind = q.refs.empty() ? QuestionKind::content : QuestionKind::structural;

  if (remote) {
    try {
      std::string prompt =
          "Classify the question as \"structural\" (it asks about a "
          "specific page or table) or \"content\". Reply with one word.\n"
          "Question: " +
          text + "\nLabel:";
      std::string label = lowercase(remote->generate(prompt, 8));
      bool structural = label.find("structural") != std::string::npos;
      // Without parsed refs a structural label is not actionable.
      q.kind = structural && !q.refs.empty() ? QuestionKind::structural
                                             : QuestionKind::content;
    } catch (const std::exception& e) {
      std::cerr << "warning: remote classifier failed (" << e.what()
                << "); using pattern-based label\n";
    }
  }
  return q;
}

namespace {

// Table ordinal encoded in the node id suffix "#table<N>".
bool table_ordinal_matches(const std::string& node_id, int ordinal) {
  const std::string marker = "#table";
  std::size_t pos = node_id.rfind(marker);
  if (pos == std::string::npos) return false;
  std::string digits = node_id.substr(pos + marker.size());
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    return false;
  return digits == std::to_string(ordinal);
}

}  // namespace

RetrievalResult retrieve_structural(const KnowledgeGraph& g,
                                    const Question& q) {
  if (q.kind != QuestionKind::structural)
    throw InputError("retrieve_structural needs a structural question");
  if (q.refs.empty())
    throw InputError("structural question has no page/table references");

  RetrievalResult result;
  for (const auto& ref : q.refs) {
    if (ref.kind == StructKind::table) {
      std::vector<const Node*> tables;
      for (const auto& n : g.nodes()) {
        if (n.kind == NodeKind::table &&
            table_ordinal_matches(n.node_id, ref.ordinal))
          tables.push_back(&n);
      }
      std::sort(tables.begin(), tables.end(),
                [](const Node* a, const Node* b) {
                  return a->node_id < b->node_id;
                });
      if (tables.empty())
        throw StructureNotFoundError("table " + std::to_string(ref.ordinal) +
                                     " is not in the graph");
      for (const Node* t : tables) result.structural_payloads.push_back(t->feature);
    } else {
      std::vector<const Node*> pages;
      for (const auto& n : g.nodes()) {
        if (n.kind == NodeKind::page && n.page_number &&
            *n.page_number == ref.ordinal)
          pages.push_back(&n);
      }
      std::sort(pages.begin(), pages.end(), [](const Node* a, const Node* b) {
        return a->node_id < b->node_id;
      });
      if (pages.empty())
        throw StructureNotFoundError("page " + std::to_string(ref.ordinal) +
                                     " is not in the graph");
      for (const Node* p : pages) {
        for (const auto& child : g.contained_nodes(p->node_id)) {
          const Node& c = g.node(child);
          if (c.kind == NodeKind::passage)
            result.structural_payloads.push_back(c.feature);
        }
      }
    }
  }
  return result;
}

namespace {

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

}  // namespace

std::string format_prompt(const Question& q, const RetrievalResult& result,
                          PromptMode mode, const std::string& custom_template) {
  std::vector<std::string> lines;
  int n = 1;
  for (const auto& text : result.context_texts) {
    lines.push_back(std::to_string(n++) + ". " + text);
  }
  for (const auto& payload : result.structural_payloads) {
    lines.push_back(std::to_string(n++) + ". " + payload);
  }
  std::string context = join(lines, "\n");

  if (!custom_template.empty()) {
    return replace_all(replace_all(custom_template, "{question}", q.text),
                       "{context}", context);
  }
  if (mode == PromptMode::no_context) {
    return "Question: " + q.text + "\n\nAnswer:";
  }
  if (context.empty())
    throw InputError("with_context prompt needs retrieved context");
  return "Answer the question based on the given contexts.\n\nContexts:\n" +
         context + "\n\nQuestion: " + q.text + "\n\nAnswer:";
}

}  // namespace kgp
