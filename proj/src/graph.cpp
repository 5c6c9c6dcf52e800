// SPDX-License-Identifier: Apache-2.0
#include "kgp/graph.hpp"

#include <algorithm>
#include <limits>

#include "kgp/errors.hpp"

namespace kgp {

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::passage: return "passage";
    case NodeKind::page: return "page";
    case NodeKind::table: return "table";
  }
  return "passage";
}

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::lexical: return "lexical";
    case EdgeKind::semantic: return "semantic";
    case EdgeKind::entity: return "entity";
    case EdgeKind::containment: return "containment";
  }
  return "lexical";
}

NodeKind node_kind_from_string(const std::string& s) {
  if (s == "passage") return NodeKind::passage;
  if (s == "page") return NodeKind::page;
  if (s == "table") return NodeKind::table;
  throw DeserializationError("unknown node kind: " + s);
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "lexical") return EdgeKind::lexical;
  if (s == "semantic") return EdgeKind::semantic;
  if (s == "entity") return EdgeKind::entity;
  if (s == "containment") return EdgeKind::containment;
  throw DeserializationError("unknown edge kind: " + s);
}

std::uint32_t KnowledgeGraph::add_node(Node node) {
  if (node.node_id.empty()) throw IdError("node id must be non-empty");
  if (index_.count(node.node_id))
    throw IdError("duplicate node id: " + node.node_id);
  std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
  index_[node.node_id] = idx;
  nodes_.push_back(std::move(node));
  adj_.emplace_back();
  return idx;
}

void KnowledgeGraph::add_undirected_edge(const std::string& u,
                                         const std::string& v, EdgeKind kind,
                                         double weight) {
  if (u == v) throw InputError("self loops are not allowed: " + u);
  std::uint32_t ui = node_index(u);
  std::uint32_t vi = node_index(v);
  if (has_edge(u, v, kind))
    throw InputError("duplicate edge " + u + " -- " + v);
  adj_[ui].push_back(AdjEntry{vi, kind, weight});
  adj_[vi].push_back(AdjEntry{ui, kind, weight});
}

void KnowledgeGraph::add_directed_edge(const std::string& src,
                                       const std::string& dst, EdgeKind kind,
                                       double weight) {
  if (src == dst) throw InputError("self loops are not allowed: " + src);
  std::uint32_t si = node_index(src);
  std::uint32_t di = node_index(dst);
  adj_[si].push_back(AdjEntry{di, kind, weight});
}

bool KnowledgeGraph::has_node(const std::string& id) const {
  return index_.count(id) > 0;
}

std::uint32_t KnowledgeGraph::node_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw IdError("unknown node id: " + id);
  return it->second;
}

const Node& KnowledgeGraph::node(const std::string& id) const {
  return nodes_[node_index(id)];
}

bool KnowledgeGraph::has_edge(const std::string& u, const std::string& v,
                              EdgeKind kind) const {
  auto it = index_.find(u);
  auto jt = index_.find(v);
  if (it == index_.end() || jt == index_.end()) return false;
  for (const auto& e : adj_[it->second]) {
    if (e.to == jt->second && e.kind == kind) return true;
  }
  return false;
}

std::vector<std::string> KnowledgeGraph::similarity_neighbors(
    const std::string& id) const {
  std::uint32_t idx = node_index(id);
  std::vector<std::string> out;
  for (const auto& e : adj_[idx]) {
    if (!is_similarity(e.kind)) continue;
    if (nodes_[e.to].kind != NodeKind::passage) continue;
    out.push_back(nodes_[e.to].node_id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> KnowledgeGraph::contained_nodes(
    const std::string& id) const {
  std::uint32_t idx = node_index(id);
  std::vector<std::string> out;
  for (const auto& e : adj_[idx]) {
    if (e.kind == EdgeKind::containment) out.push_back(nodes_[e.to].node_id);
  }
  return out;
}

std::vector<EdgeRecord> KnowledgeGraph::edge_records() const {
  std::vector<EdgeRecord> out;
  for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
    for (const auto& e : adj_[u]) {
      if (is_similarity(e.kind)) {
        // Each undirected edge is stored twice; keep the src < dst copy.
        if (nodes_[u].node_id < nodes_[e.to].node_id) {
          out.push_back(EdgeRecord{nodes_[u].node_id, nodes_[e.to].node_id,
                                   e.kind, e.weight});
        }
      } else {
        out.push_back(EdgeRecord{nodes_[u].node_id, nodes_[e.to].node_id,
                                 e.kind, e.weight});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return out;
}

std::size_t KnowledgeGraph::similarity_edge_count() const {
  std::size_t twice = 0;
  for (const auto& l : adj_) {
    for (const auto& e : l) {
      if (is_similarity(e.kind)) ++twice;
    }
  }
  return twice / 2;
}

std::size_t KnowledgeGraph::containment_edge_count() const {
  std::size_t n = 0;
  for (const auto& l : adj_) {
    for (const auto& e : l) {
      if (e.kind == EdgeKind::containment) ++n;
    }
  }
  return n;
}

std::size_t KnowledgeGraph::remove_doc_nodes(const std::string& doc_id) {
  std::vector<std::uint32_t> remap(nodes_.size(),
                                   std::numeric_limits<std::uint32_t>::max());
  std::vector<Node> kept;
  std::size_t removed = 0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].doc_id == doc_id) {
      ++removed;
      continue;
    }
    remap[i] = static_cast<std::uint32_t>(kept.size());
    kept.push_back(std::move(nodes_[i]));
  }
  if (removed == 0) return 0;
  std::vector<std::vector<AdjEntry>> new_adj(kept.size());
  for (std::uint32_t i = 0; i < adj_.size(); ++i) {
    if (remap[i] == std::numeric_limits<std::uint32_t>::max()) continue;
    for (const auto& e : adj_[i]) {
      if (remap[e.to] == std::numeric_limits<std::uint32_t>::max()) continue;
      new_adj[remap[i]].push_back(AdjEntry{remap[e.to], e.kind, e.weight});
    }
  }
  nodes_ = std::move(kept);
  adj_ = std::move(new_adj);
  index_.clear();
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    index_[nodes_[i].node_id] = i;
  return removed;
}

bool KnowledgeGraph::operator==(const KnowledgeGraph& other) const {
  // Node identity is the id, not the insertion index.
  if (nodes_.size() != other.nodes_.size()) return false;
  for (const Node& a : nodes_) {
    if (!other.has_node(a.node_id)) return false;
    const Node& b = other.node(a.node_id);
    if (a.kind != b.kind || a.feature != b.feature || a.doc_id != b.doc_id ||
        a.page_number != b.page_number)
      return false;
  }
  return edge_records() == other.edge_records();
}

GraphStats graph_stats(const KnowledgeGraph& g) {
  GraphStats s;
  s.num_nodes = g.node_count();
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage) ++s.num_passage_nodes;
  }
  s.num_edges = g.similarity_edge_count();
  s.containment_edges = g.containment_edge_count();
  double np = static_cast<double>(s.num_passage_nodes);
  if (s.num_passage_nodes >= 2) {
    s.density = 2.0 * static_cast<double>(s.num_edges) / (np * (np - 1.0));
  }
  if (s.num_passage_nodes >= 1) {
    s.avg_degree = 2.0 * static_cast<double>(s.num_edges) / np;
  }
  return s;
}

}  // namespace kgp
