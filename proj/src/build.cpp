// SPDX-License-Identifier: Apache-2.0
#include "kgp/build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "kgp/errors.hpp"
#include "kgp/kernels.hpp"
#include "kgp/remote.hpp"
#include "kgp/text.hpp"

namespace kgp {

namespace {

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

std::string escape_cell(const std::string& cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string render_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) {
    out += " " + escape_cell(c) + " |";
  }
  return out;
}

KnowledgeGraph make_passage_graph(const Corpus& corpus) {
  if (corpus.passages.empty())
    throw EmptyCorpusError("graph construction needs a split, non-empty corpus");
  KnowledgeGraph g;
  for (const auto& p : corpus.passages) {
    g.add_node(Node{p.passage_id, NodeKind::passage, p.text, p.doc_id,
                    p.page_number});
  }
  g.meta().passage_budget = corpus.passage_budget;
  return g;
}

// Ranks of passage node ids in ascending id order; used as the knn
// tie-breaker so results do not depend on insertion order.
std::vector<int> id_ranks(const std::vector<std::string>& ids) {
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  std::vector<int> rank(ids.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    rank[order[r]] = static_cast<int>(r);
  return rank;
}

void add_pair_edges(KnowledgeGraph& g, const std::vector<std::string>& ids,
                    const std::vector<kernels::WeightedPair>& pairs,
                    EdgeKind kind) {
  for (const auto& e : pairs) {
    g.add_undirected_edge(ids[e.u], ids[e.v], kind, e.w);
  }
}

void add_lexical_edges(KnowledgeGraph& g, const Corpus& corpus,
                       const KeywordIndex& index) {
  if (index.per_passage_keywords.size() != corpus.passages.size())
    throw InconsistentInputError(
        "keyword index covers a different passage set than the corpus");
  std::map<std::string, int> dict;
  for (const auto& kw : index.keyword_space)
    dict.emplace(kw, static_cast<int>(dict.size()));

  std::vector<std::string> ids;
  std::vector<std::vector<int>> sets;
  ids.reserve(corpus.passages.size());
  sets.reserve(corpus.passages.size());
  for (const auto& p : corpus.passages) {
    auto it = index.per_passage_keywords.find(p.passage_id);
    if (it == index.per_passage_keywords.end())
      throw InconsistentInputError("keyword index is missing passage " +
                                   p.passage_id);
    std::vector<int> s;
    s.reserve(it->second.size());
    for (const auto& kw : it->second) s.push_back(dict.at(kw));
    std::sort(s.begin(), s.end());
    ids.push_back(p.passage_id);
    sets.push_back(std::move(s));
  }
  add_pair_edges(g, ids, kernels::overlap_edges(sets), EdgeKind::lexical);
  g.meta().keywords = index;
  g.meta().keywords_m = index.m;
}

void add_semantic_edges(KnowledgeGraph& g, const Corpus& corpus,
                        const EmbeddingMap& embeddings, int k, bool mutual,
                        const std::string& provider_name) {
  if (embeddings.size() != corpus.passages.size())
    throw InconsistentInputError(
        "embedding map covers a different passage set than the corpus");
  std::vector<std::string> ids;
  std::vector<Vector> embs;
  ids.reserve(corpus.passages.size());
  embs.reserve(corpus.passages.size());
  for (const auto& p : corpus.passages) {
    auto it = embeddings.find(p.passage_id);
    if (it == embeddings.end())
      throw MissingEmbeddingError("no embedding for passage " + p.passage_id);
    ids.push_back(p.passage_id);
    embs.push_back(it->second);
  }
  for (const auto& e : embs) {
    if (e.size() != embs[0].size())
      throw DimensionError("passage embeddings have mixed dimensions");
  }
  add_pair_edges(g, ids, kernels::knn_edges(embs, k, mutual, id_ranks(ids)),
                 EdgeKind::semantic);
  g.meta().knn_k = k;
  g.meta().mutual_knn = mutual;
  g.meta().provider = provider_name;
  g.meta().dimension = static_cast<int>(embs[0].size());
}

std::set<std::string> extract_or_throw(const EntityExtractor& extractor,
                                       const std::string& passage_id,
                                       const std::string& text) {
  try {
    return extractor.extract(text);
  } catch (const std::exception& e) {
    throw ExtractionError("entity extraction failed for passage " +
                          passage_id + ": " + e.what());
  }
}

void add_entity_edges(KnowledgeGraph& g, const Corpus& corpus,
                      const EntityExtractor& extractor) {
  std::vector<std::string> ids;
  std::vector<std::set<std::string>> entity_sets;
  for (const auto& p : corpus.passages) {
    ids.push_back(p.passage_id);
    entity_sets.push_back(extract_or_throw(extractor, p.passage_id, p.text));
  }
  std::map<std::string, int> dict;
  for (const auto& s : entity_sets) {
    for (const auto& e : s) dict.emplace(e, 0);
  }
  int next = 0;
  for (auto& [_, id] : dict) id = next++;

  std::vector<std::vector<int>> sets;
  sets.reserve(entity_sets.size());
  for (const auto& s : entity_sets) {
    std::vector<int> v;
    v.reserve(s.size());
    for (const auto& e : s) v.push_back(dict.at(e));
    std::sort(v.begin(), v.end());
    sets.push_back(std::move(v));
  }
  add_pair_edges(g, ids, kernels::overlap_edges(sets), EdgeKind::entity);
  g.meta().gazetteer = extractor.entries();
}

// Groups passage nodes by document in insertion order.
std::map<std::string, std::vector<const Node*>> passages_by_doc(
    const KnowledgeGraph& g) {
  std::map<std::string, std::vector<const Node*>> out;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage) out[n.doc_id].push_back(&n);
  }
  return out;
}

void add_structure_for_document(KnowledgeGraph& g, const Document& doc,
                                const std::vector<Passage>& passages) {
  std::set<int> page_numbers;
  for (const auto& page : doc.pages) page_numbers.insert(page.page_number);
  for (const auto& p : passages) {
    if (p.page_number && !page_numbers.count(*p.page_number))
      throw StructureError("passage " + p.passage_id + " references page " +
                           std::to_string(*p.page_number) +
                           " absent from document " + doc.doc_id);
  }
  for (const auto& page : doc.pages) {
    std::string page_id =
        doc.doc_id + "#page" + std::to_string(page.page_number);
    g.add_node(Node{page_id, NodeKind::page, std::to_string(page.page_number),
                    doc.doc_id, page.page_number});
    for (const auto& p : passages) {
      if (p.page_number == page.page_number)
        g.add_directed_edge(page_id, p.passage_id, EdgeKind::containment, 1.0);
    }
    for (const auto& b : page.blocks) {
      if (b.kind != BlockKind::table) continue;
      std::string table_id =
          doc.doc_id + "#table" + std::to_string(*b.table_id);
      g.add_node(Node{table_id, NodeKind::table, markdown_table(b.content),
                      doc.doc_id, page.page_number});
      g.add_directed_edge(page_id, table_id, EdgeKind::containment, 1.0);
    }
  }
}

}  // namespace

std::string markdown_table(const std::string& grid) {
  std::vector<std::string> lines = split_lines(grid);
  if (lines.empty()) throw InputError("table grid is empty");
  std::vector<std::string> out_rows;
  std::vector<std::string> header = split_cells(lines[0]);
  out_rows.push_back(render_row(header));
  std::string sep = "|";
  for (std::size_t i = 0; i < header.size(); ++i) sep += " --- |";
  out_rows.push_back(sep);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    out_rows.push_back(render_row(split_cells(lines[i])));
  }
  return join(out_rows, "\n");
}

GazetteerExtractor::GazetteerExtractor(std::vector<std::string> entries)
    : raw_entries_(std::move(entries)) {
  for (const auto& e : raw_entries_) {
    std::vector<std::string> toks = terms(e);
    if (toks.empty())
      throw InputError("gazetteer entry has no alphanumeric tokens: \"" + e +
                       "\"");
    patterns_.emplace_back(join(toks), std::move(toks));
  }
}

std::set<std::string> GazetteerExtractor::extract(
    const std::string& text) const {
  std::vector<std::string> toks = terms(text);
  std::set<std::string> out;
  for (const auto& [canon, pattern] : patterns_) {
    if (out.count(canon)) continue;
    if (pattern.size() > toks.size()) continue;
    for (std::size_t i = 0; i + pattern.size() <= toks.size(); ++i) {
      bool match = true;
      for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (toks[i + j] != pattern[j]) {
          match = false;
          break;
        }
      }
      if (match) {
        out.insert(canon);
        break;
      }
    }
  }
  return out;
}

KnowledgeGraph build_tfidf_graph(const Corpus& corpus,
                                 const KeywordIndex& index) {
  KnowledgeGraph g = make_passage_graph(corpus);
  add_lexical_edges(g, corpus, index);
  g.meta().method = "tfidf";
  g.meta().kinds = {"lexical"};
  return g;
}

KnowledgeGraph build_knn_graph(const Corpus& corpus,
                               const EmbeddingMap& embeddings, int k,
                               bool mutual, const std::string& provider_name) {
  KnowledgeGraph g = make_passage_graph(corpus);
  add_semantic_edges(g, corpus, embeddings, k, mutual, provider_name);
  g.meta().method = "knn";
  g.meta().kinds = {"semantic"};
  return g;
}

KnowledgeGraph build_entity_graph(const Corpus& corpus,
                                  const EntityExtractor& extractor) {
  KnowledgeGraph g = make_passage_graph(corpus);
  add_entity_edges(g, corpus, extractor);
  g.meta().method = "entity";
  g.meta().kinds = {"entity"};
  return g;
}

KnowledgeGraph build_merged_graph(const Corpus& corpus,
                                  const MergedSpec& spec) {
  if (!spec.keywords && !spec.embeddings && !spec.extractor)
    throw InputError("merged build needs at least one edge kind");
  KnowledgeGraph g = make_passage_graph(corpus);
  std::vector<std::string> kinds;
  if (spec.keywords) {
    add_lexical_edges(g, corpus, *spec.keywords);
    kinds.push_back("lexical");
  }
  if (spec.embeddings) {
    add_semantic_edges(g, corpus, *spec.embeddings, spec.knn_k,
                       spec.mutual_knn, spec.provider);
    kinds.push_back("semantic");
  }
  if (spec.extractor) {
    add_entity_edges(g, corpus, *spec.extractor);
    kinds.push_back("entity");
  }
  g.meta().method = "merged";
  g.meta().kinds = std::move(kinds);
  return g;
}

KnowledgeGraph add_structural_nodes(KnowledgeGraph g, const Corpus& corpus) {
  if (g.meta().with_structure)
    throw InputError("graph already has structural nodes");
  for (const auto& p : corpus.passages) {
    if (!g.has_node(p.passage_id))
      throw InconsistentInputError("graph is missing passage " + p.passage_id +
                                   " from the corpus");
  }
  for (const auto& doc : corpus.documents) {
    std::vector<Passage> doc_passages;
    for (const auto& p : corpus.passages) {
      if (p.doc_id == doc.doc_id) doc_passages.push_back(p);
    }
    add_structure_for_document(g, doc, doc_passages);
  }
  g.meta().with_structure = true;
  return g;
}

namespace {

struct DocTerms {
  std::vector<std::string> passage_ids;
  std::vector<std::string> passage_texts;
};

// Keyword extraction for one new document against the documents already
// in the graph: df is recomputed over old docs plus the new one, but only
// the new document's keyword set is (re)derived.
std::set<std::string> new_doc_keywords(
    const KnowledgeGraph& g, const Document& doc,
    const std::vector<Passage>& new_passages, const StopwordSet& stopwords) {
  auto by_doc = passages_by_doc(g);
  std::unordered_map<std::string, int> tf_new;
  for (const auto& p : new_passages) {
    for (auto& t : content_terms(p.text, stopwords)) ++tf_new[t];
  }
  std::unordered_map<std::string, int> df;
  std::size_t n_existing = 0;
  for (const auto& [did, nodes] : by_doc) {
    if (did == doc.doc_id) continue;  // the new nodes are already in g
    ++n_existing;
    std::set<std::string> doc_terms;
    for (const Node* n : nodes) {
      for (auto& t : content_terms(n->feature, stopwords)) doc_terms.insert(t);
    }
    for (const auto& t : doc_terms) ++df[t];
  }
  for (const auto& [t, _] : tf_new) ++df[t];

  const double n_docs = static_cast<double>(n_existing + 1);
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& [term, count] : tf_new) {
    int d = df[term];
    if (static_cast<double>(d) == n_docs) continue;
    scored.emplace_back(count * std::log(n_docs / d), term);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  int m = std::max(1, g.meta().keywords_m);
  if (scored.size() > static_cast<std::size_t>(m))
    scored.resize(static_cast<std::size_t>(m));
  std::set<std::string> kws;
  for (const auto& [_, term] : scored) kws.insert(term);
  for (const auto& t : terms(doc.title)) kws.insert(t);
  return kws;
}

void add_incremental_lexical(KnowledgeGraph& g, const Document& doc,
                             const std::vector<Passage>& new_passages,
                             const StopwordSet& stopwords) {
  KeywordIndex& index = g.meta().keywords;
  std::set<std::string> k_new = new_doc_keywords(g, doc, new_passages, stopwords);
  index.keyword_space.insert(k_new.begin(), k_new.end());
  index.per_document_keywords[doc.doc_id] = k_new;

  // Keyword space only grows, so every passage keyword set is refreshed
  // as terms(text) intersect keyword_space.
  std::vector<std::pair<std::string, const std::string*>> all;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage && n.doc_id != doc.doc_id)
      all.emplace_back(n.node_id, &n.feature);
  }
  std::vector<std::string> new_texts;
  new_texts.reserve(new_passages.size());
  for (const auto& p : new_passages) new_texts.push_back(p.text);
  for (std::size_t i = 0; i < new_passages.size(); ++i)
    all.emplace_back(new_passages[i].passage_id, &new_texts[i]);

  for (const auto& [pid, text] : all) {
    std::set<std::string> pk;
    for (const auto& t : terms(*text)) {
      if (index.keyword_space.count(t)) pk.insert(t);
    }
    index.per_passage_keywords[pid] = std::move(pk);
  }

  std::set<std::string> new_ids;
  for (const auto& p : new_passages) new_ids.insert(p.passage_id);
  for (const auto& p : new_passages) {
    const auto& kp = index.per_passage_keywords.at(p.passage_id);
    for (const auto& [qid, _] : all) {
      if (qid == p.passage_id) continue;
      // New-new pairs once; new-existing always from the new side.
      if (new_ids.count(qid) && !(p.passage_id < qid)) continue;
      const auto& kq = index.per_passage_keywords.at(qid);
      std::size_t common = 0;
      for (const auto& kw : kp) {
        if (kq.count(kw)) ++common;
      }
      if (common > 0)
        g.add_undirected_edge(p.passage_id, qid, EdgeKind::lexical,
                              static_cast<double>(common));
    }
  }
}

void add_incremental_semantic(KnowledgeGraph& g,
                              const std::vector<Passage>& new_passages,
                              EmbeddingProvider* provider) {
  std::unique_ptr<EmbeddingProvider> local;
  if (!provider) {
    if (g.meta().provider == "hashing" && g.meta().dimension >= 8) {
      local = std::make_unique<HashingProvider>(g.meta().dimension);
      provider = local.get();
    } else {
      throw InputError(
          "incremental update of a graph built with provider \"" +
          g.meta().provider + "\" needs an embedding provider");
    }
  }

  std::vector<std::string> ids;
  std::vector<std::string> texts;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage && n.doc_id != new_passages[0].doc_id) {
      ids.push_back(n.node_id);
      texts.push_back(n.feature);
    }
  }
  const std::size_t n_old = ids.size();
  for (const auto& p : new_passages) {
    ids.push_back(p.passage_id);
    texts.push_back(p.text);
  }
  const std::size_t n = ids.size();
  const int k = g.meta().knn_k;
  if (static_cast<std::size_t>(k) >= n)
    throw InputError("knn k must be smaller than the number of nodes");

  std::vector<Vector> embs = provider->embed(texts);
  std::vector<int> rank = id_ranks(ids);

  auto top_k = [&](std::size_t u) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t v = 0; v < n; ++v) {
      if (v != u) cand.emplace_back(cosine(embs[u], embs[v]), v);
    }
    std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return rank[a.second] < rank[b.second];
    });
    cand.resize(static_cast<std::size_t>(k));
    std::set<std::size_t> out;
    for (const auto& [_, v] : cand) out.insert(v);
    return out;
  };

  std::vector<std::set<std::size_t>> picks(n);
  const int n_int = static_cast<int>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (int u = 0; u < n_int; ++u) {
    picks[static_cast<std::size_t>(u)] = top_k(static_cast<std::size_t>(u));
  }

  const bool mutual = g.meta().mutual_knn;
  for (std::size_t p = n_old; p < n; ++p) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v == p) continue;
      if (v >= n_old && v < p) continue;  // new-new pair handled once
      bool forward = picks[p].count(v) > 0;
      bool backward = picks[v].count(p) > 0;
      bool edge = mutual ? (forward && backward) : (forward || backward);
      if (!edge) continue;
      if (g.has_edge(ids[p], ids[v], EdgeKind::semantic)) continue;
      std::size_t a = std::min(p, v);
      std::size_t b = std::max(p, v);
      g.add_undirected_edge(ids[p], ids[v], EdgeKind::semantic,
                            cosine(embs[a], embs[b]));
    }
  }
}

void add_incremental_entity(KnowledgeGraph& g,
                            const std::vector<Passage>& new_passages,
                            const EntityExtractor* extractor) {
  std::unique_ptr<GazetteerExtractor> local;
  if (!extractor) {
    if (g.meta().gazetteer.empty())
      throw InputError("incremental update of an entity graph needs an "
                       "entity extractor");
    local = std::make_unique<GazetteerExtractor>(g.meta().gazetteer);
    extractor = local.get();
  }
  std::vector<std::pair<std::string, std::set<std::string>>> old_sets;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::passage && n.doc_id != new_passages[0].doc_id) {
      old_sets.emplace_back(n.node_id,
                            extract_or_throw(*extractor, n.node_id, n.feature));
    }
  }
  std::vector<std::pair<std::string, std::set<std::string>>> new_sets;
  for (const auto& p : new_passages) {
    new_sets.emplace_back(p.passage_id,
                          extract_or_throw(*extractor, p.passage_id, p.text));
  }
  auto overlap = [](const std::set<std::string>& a,
                    const std::set<std::string>& b) {
    std::size_t c = 0;
    for (const auto& e : a) {
      if (b.count(e)) ++c;
    }
    return c;
  };
  for (std::size_t i = 0; i < new_sets.size(); ++i) {
    for (const auto& [qid, qset] : old_sets) {
      std::size_t c = overlap(new_sets[i].second, qset);
      if (c > 0)
        g.add_undirected_edge(new_sets[i].first, qid, EdgeKind::entity,
                              static_cast<double>(c));
    }
    for (std::size_t j = i + 1; j < new_sets.size(); ++j) {
      std::size_t c = overlap(new_sets[i].second, new_sets[j].second);
      if (c > 0)
        g.add_undirected_edge(new_sets[i].first, new_sets[j].first,
                              EdgeKind::entity, static_cast<double>(c));
    }
  }
}

}  // namespace

namespace {

EmbeddingMap embed_passages(const Corpus& corpus, EmbeddingProvider& provider) {
  std::vector<std::string> texts;
  texts.reserve(corpus.passages.size());
  for (const auto& p : corpus.passages) texts.push_back(p.text);
  std::vector<Vector> vecs = provider.embed(texts);
  EmbeddingMap map;
  for (std::size_t i = 0; i < corpus.passages.size(); ++i)
    map[corpus.passages[i].passage_id] = std::move(vecs[i]);
  return map;
}

std::unique_ptr<EmbeddingProvider> make_provider(const BuildOptions& options) {
  if (options.provider == "hashing")
    return std::make_unique<HashingProvider>(options.dimension);
  if (options.provider == "remote")
    return std::make_unique<RemoteEmbeddingProvider>(
        RemoteConfig::embed_from_env(), options.dimension);
  throw InputError("unknown embedding provider: " + options.provider);
}

}  // namespace

KnowledgeGraph build_graph(Corpus& corpus, const BuildOptions& options) {
  split_corpus(corpus, options.passage_budget);
  KnowledgeGraph g;
  if (options.method == "tfidf") {
    KeywordIndex index =
        extract_keywords(corpus, options.keywords_m, options.stopwords);
    g = build_tfidf_graph(corpus, index);
  } else if (options.method == "knn") {
    auto provider = make_provider(options);
    g = build_knn_graph(corpus, embed_passages(corpus, *provider),
                        options.knn_k, options.mutual_knn, provider->name());
  } else if (options.method == "entity") {
    if (options.gazetteer.empty())
      throw InputError("entity graphs need a gazetteer");
    GazetteerExtractor extractor(options.gazetteer);
    g = build_entity_graph(corpus, extractor);
  } else if (options.method == "merged") {
    KeywordIndex index =
        extract_keywords(corpus, options.keywords_m, options.stopwords);
    auto provider = make_provider(options);
    EmbeddingMap map = embed_passages(corpus, *provider);
    MergedSpec spec;
    spec.keywords = &index;
    spec.embeddings = &map;
    spec.knn_k = options.knn_k;
    spec.mutual_knn = options.mutual_knn;
    spec.provider = provider->name();
    std::unique_ptr<GazetteerExtractor> extractor;
    if (!options.gazetteer.empty()) {
      extractor = std::make_unique<GazetteerExtractor>(options.gazetteer);
      spec.extractor = extractor.get();
    }
    g = build_merged_graph(corpus, spec);
  } else {
    throw InputError("unknown build method: " + options.method);
  }
  if (options.with_structure) g = add_structural_nodes(std::move(g), corpus);
  return g;
}

KnowledgeGraph add_document(const KnowledgeGraph& g, const Document& doc,
                            const UpdateContext& ctx) {
  if (doc.doc_id.empty()) throw InputError("document id must be non-empty");
  if (doc.title.empty()) throw InputError("document title must be non-empty");
  for (const auto& n : g.nodes()) {
    if (n.doc_id == doc.doc_id)
      throw IdError("document " + doc.doc_id + " is already in the graph");
  }
  std::vector<Passage> new_passages =
      split_document(doc, g.meta().passage_budget);

  KnowledgeGraph out = g;
  for (const auto& p : new_passages) {
    out.add_node(Node{p.passage_id, NodeKind::passage, p.text, p.doc_id,
                      p.page_number});
  }

  const StopwordSet& stopwords =
      ctx.stopwords ? *ctx.stopwords : default_stopwords();
  for (const auto& kind : g.meta().kinds) {
    if (kind == "lexical") {
      add_incremental_lexical(out, doc, new_passages, stopwords);
    } else if (kind == "semantic") {
      add_incremental_semantic(out, new_passages, ctx.provider);
    } else if (kind == "entity") {
      add_incremental_entity(out, new_passages, ctx.extractor);
    }
  }
  if (g.meta().with_structure) {
    add_structure_for_document(out, doc, new_passages);
  }
  return out;
}

KnowledgeGraph remove_document(const KnowledgeGraph& g,
                               const std::string& doc_id) {
  KnowledgeGraph out = g;
  std::size_t removed = out.remove_doc_nodes(doc_id);
  if (removed == 0) throw IdError("document " + doc_id + " is not in the graph");
  KeywordIndex& index = out.meta().keywords;
  index.per_document_keywords.erase(doc_id);
  auto prefix = doc_id + "#";
  for (auto it = index.per_passage_keywords.begin();
       it != index.per_passage_keywords.end();) {
    if (it->first.rfind(prefix, 0) == 0) {
      it = index.per_passage_keywords.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

}  // namespace kgp
