// SPDX-License-Identifier: Apache-2.0
#include "kgp/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kgp/errors.hpp"

namespace kgp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json meta_to_json(const ConstructionMeta& m) {
  ordered_json j;
  j["method"] = m.method;
  j["passage_budget"] = m.passage_budget;
  j["with_structure"] = m.with_structure;
  j["kinds"] = m.kinds;
  j["keywords_m"] = m.keywords_m;
  j["knn_k"] = m.knn_k;
  j["mutual_knn"] = m.mutual_knn;
  j["provider"] = m.provider;
  j["dimension"] = m.dimension;
  j["gazetteer"] = m.gazetteer;
  ordered_json kw;
  kw["m"] = m.keywords.m;
  kw["keyword_space"] = std::vector<std::string>(m.keywords.keyword_space.begin(),
                                                 m.keywords.keyword_space.end());
  ordered_json per_doc = ordered_json::object();
  for (const auto& [doc, kws] : m.keywords.per_document_keywords)
    per_doc[doc] = std::vector<std::string>(kws.begin(), kws.end());
  kw["per_document_keywords"] = std::move(per_doc);
  ordered_json per_passage = ordered_json::object();
  for (const auto& [pid, kws] : m.keywords.per_passage_keywords)
    per_passage[pid] = std::vector<std::string>(kws.begin(), kws.end());
  kw["per_passage_keywords"] = std::move(per_passage);
  j["keywords"] = std::move(kw);
  return j;
}

ConstructionMeta meta_from_json(const json& j, const std::string& origin) {
  ConstructionMeta m;
  try {
    m.method = j.value("method", std::string("none"));
    m.passage_budget = j.value("passage_budget", 250);
    m.with_structure = j.value("with_structure", false);
    m.kinds = j.value("kinds", std::vector<std::string>{});
    m.keywords_m = j.value("keywords_m", 0);
    m.knn_k = j.value("knn_k", 0);
    m.mutual_knn = j.value("mutual_knn", false);
    m.provider = j.value("provider", std::string());
    m.dimension = j.value("dimension", 0);
    m.gazetteer = j.value("gazetteer", std::vector<std::string>{});
    if (j.contains("keywords")) {
      const json& kw = j["keywords"];
      m.keywords.m = kw.value("m", 0);
      for (const auto& s : kw.value("keyword_space", std::vector<std::string>{}))
        m.keywords.keyword_space.insert(s);
      if (kw.contains("per_document_keywords")) {
        for (const auto& [doc, arr] : kw["per_document_keywords"].items()) {
          std::set<std::string> kws;
          for (const auto& s : arr) kws.insert(s.get<std::string>());
          m.keywords.per_document_keywords[doc] = std::move(kws);
        }
      }
      if (kw.contains("per_passage_keywords")) {
        for (const auto& [pid, arr] : kw["per_passage_keywords"].items()) {
          std::set<std::string> kws;
          for (const auto& s : arr) kws.insert(s.get<std::string>());
          m.keywords.per_passage_keywords[pid] = std::move(kws);
        }
      }
    }
  } catch (const json::exception& e) {
    throw DeserializationError(origin + ": bad meta: " + e.what());
  }
  return m;
}

}  // namespace

std::string graph_to_json_string(const KnowledgeGraph& g) {
  ordered_json root;
  root["meta"] = meta_to_json(g.meta());
  root["nodes"] = ordered_json::array();
  for (const auto& n : g.nodes()) {
    ordered_json jn;
    jn["id"] = n.node_id;
    jn["kind"] = to_string(n.kind);
    jn["feature"] = n.feature;
    jn["doc_id"] = n.doc_id;
    if (n.page_number) jn["page"] = *n.page_number;
    root["nodes"].push_back(std::move(jn));
  }
  root["edges"] = ordered_json::array();
  for (const auto& e : g.edge_records()) {
    ordered_json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["kind"] = to_string(e.kind);
    je["weight"] = e.weight;
    root["edges"].push_back(std::move(je));
  }
  return root.dump(2);
}

KnowledgeGraph graph_from_json_string(const std::string& data,
                                      const std::string& origin) {
  json root;
  try {
    root = json::parse(data);
  } catch (const json::exception& e) {
    throw DeserializationError(origin + ": invalid JSON: " + e.what());
  }
  if (!root.is_object() || !root.contains("nodes") || !root.contains("edges"))
    throw DeserializationError(origin + ": missing nodes/edges");

  KnowledgeGraph g;
  if (root.contains("meta")) g.meta() = meta_from_json(root["meta"], origin);
  try {
    for (const auto& jn : root["nodes"]) {
      Node n;
      n.node_id = jn.at("id").get<std::string>();
      n.kind = node_kind_from_string(jn.at("kind").get<std::string>());
      n.feature = jn.at("feature").get<std::string>();
      n.doc_id = jn.at("doc_id").get<std::string>();
      if (jn.contains("page")) n.page_number = jn["page"].get<int>();
      g.add_node(std::move(n));
    }
    for (const auto& je : root["edges"]) {
      std::string src = je.at("src").get<std::string>();
      std::string dst = je.at("dst").get<std::string>();
      EdgeKind kind = edge_kind_from_string(je.at("kind").get<std::string>());
      double weight = je.at("weight").get<double>();
      if (kind == EdgeKind::containment) {
        g.add_directed_edge(src, dst, kind, weight);
      } else {
        g.add_undirected_edge(src, dst, kind, weight);
      }
    }
  } catch (const json::exception& e) {
    throw DeserializationError(origin + ": " + e.what());
  } catch (const IdError& e) {
    throw DeserializationError(origin + ": " + e.what());
  } catch (const InputError& e) {
    throw DeserializationError(origin + ": " + e.what());
  }
  return g;
}

void save_graph(const KnowledgeGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << graph_to_json_string(g) << "\n";
}

KnowledgeGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return graph_from_json_string(ss.str(), path);
}

std::string stats_to_json_string(const GraphStats& s) {
  ordered_json j;
  j["num_nodes"] = s.num_nodes;
  j["num_passage_nodes"] = s.num_passage_nodes;
  j["num_edges"] = s.num_edges;
  j["containment_edges"] = s.containment_edges;
  j["density"] = s.density;
  j["avg_degree"] = s.avg_degree;
  return j.dump(2);
}

}  // namespace kgp
