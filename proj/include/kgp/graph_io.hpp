// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "kgp/graph.hpp"

namespace kgp {

// Serialization is canonical: node order is preserved, each undirected
// edge appears once with src < dst, and map-valued meta fields are key
// sorted, so save(load(save(g))) is byte-identical to save(g).
std::string graph_to_json_string(const KnowledgeGraph& g);
KnowledgeGraph graph_from_json_string(const std::string& data,
                                      const std::string& origin = "graph");

void save_graph(const KnowledgeGraph& g, const std::string& path);
KnowledgeGraph load_graph(const std::string& path);

std::string stats_to_json_string(const GraphStats& s);

}  // namespace kgp
