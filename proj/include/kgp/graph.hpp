// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgp/keywords.hpp"

namespace kgp {

enum class NodeKind { passage, page, table };
enum class EdgeKind { lexical, semantic, entity, containment };

std::string to_string(NodeKind k);
std::string to_string(EdgeKind k);
NodeKind node_kind_from_string(const std::string& s);
EdgeKind edge_kind_from_string(const std::string& s);

inline bool is_similarity(EdgeKind k) { return k != EdgeKind::containment; }

struct Node {
  std::string node_id;
  NodeKind kind = NodeKind::passage;
  // passage: text; page: page number string; table: markdown rendering.
  std::string feature;
  std::string doc_id;
  std::optional<int> page_number;
};

struct AdjEntry {
  std::uint32_t to = 0;
  EdgeKind kind = EdgeKind::lexical;
  double weight = 0.0;
};

// Canonical edge listing: similarity edges appear once with src < dst,
// containment edges keep their direction.
struct EdgeRecord {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::lexical;
  double weight = 0.0;

  bool operator==(const EdgeRecord&) const = default;
};

// How the graph was built, kept so incremental updates can replay the
// same construction on new documents.
struct ConstructionMeta {
  std::string method = "none";  // tfidf | knn | entity | merged | none
  int passage_budget = 250;
  bool with_structure = false;
  int keywords_m = 0;
  int knn_k = 0;
  bool mutual_knn = false;
  std::string provider;  // hashing | remote
  int dimension = 0;
  std::vector<std::string> gazetteer;
  std::vector<std::string> kinds;  // edge kinds present (merged builds)
  KeywordIndex keywords;           // lexical index state
};

class KnowledgeGraph {
 public:
  std::uint32_t add_node(Node node);
  void add_undirected_edge(const std::string& u, const std::string& v,
                           EdgeKind kind, double weight);
  void add_directed_edge(const std::string& src, const std::string& dst,
                         EdgeKind kind, double weight);

  bool has_node(const std::string& id) const;
  std::uint32_t node_index(const std::string& id) const;  // IdError if absent
  const Node& node(const std::string& id) const;
  const Node& node_at(std::uint32_t idx) const { return nodes_[idx]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<AdjEntry>& adjacency(std::uint32_t idx) const {
    return adj_[idx];
  }

  bool has_edge(const std::string& u, const std::string& v,
                EdgeKind kind) const;

  // Passage nodes adjacent to `id` through similarity edges, deduplicated
  // and sorted by node id.
  std::vector<std::string> similarity_neighbors(const std::string& id) const;

  // Containment targets of `id` in insertion order.
  std::vector<std::string> contained_nodes(const std::string& id) const;

  std::vector<EdgeRecord> edge_records() const;

  std::size_t similarity_edge_count() const;
  std::size_t containment_edge_count() const;

  // Drops every node whose doc_id matches, along with incident edges.
  // Returns the number of nodes removed.
  std::size_t remove_doc_nodes(const std::string& doc_id);

  ConstructionMeta& meta() { return meta_; }
  const ConstructionMeta& meta() const { return meta_; }

  bool operator==(const KnowledgeGraph& other) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<AdjEntry>> adj_;
  std::map<std::string, std::uint32_t> index_;
  ConstructionMeta meta_;
};

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_passage_nodes = 0;
  std::size_t num_edges = 0;  // undirected similarity edges
  std::size_t containment_edges = 0;
  double density = 0.0;     // 2|E| / (n(n-1)) over passage nodes
  double avg_degree = 0.0;  // 2|E| / n over passage nodes
};

GraphStats graph_stats(const KnowledgeGraph& g);

}  // namespace kgp
