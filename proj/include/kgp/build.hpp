// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kgp/corpus.hpp"
#include "kgp/embed.hpp"
#include "kgp/graph.hpp"
#include "kgp/keywords.hpp"

namespace kgp {

// Renders a tab/newline cell grid as a markdown table: header row, a
// |---| separator row, then one row per remaining grid line. Pipes in
// cells are escaped.
std::string markdown_table(const std::string& grid);

class EntityExtractor {
 public:
  virtual ~EntityExtractor() = default;
  // Returns the canonical entity names found in the text.
  virtual std::set<std::string> extract(const std::string& text) const = 0;
  // Entries needed to rebuild the extractor, empty when not applicable.
  virtual std::vector<std::string> entries() const { return {}; }
};

// Matches a fixed entity list against the normalized token stream.
// Multi-word entries match contiguous token runs.
class GazetteerExtractor final : public EntityExtractor {
 public:
  explicit GazetteerExtractor(std::vector<std::string> entries);
  std::set<std::string> extract(const std::string& text) const override;
  std::vector<std::string> entries() const override { return raw_entries_; }

 private:
  std::vector<std::string> raw_entries_;
  // canonical form -> normalized token sequence
  std::vector<std::pair<std::string, std::vector<std::string>>> patterns_;
};

// Lexical graph: passages are linked when their keyword sets intersect,
// weight = intersection size.
KnowledgeGraph build_tfidf_graph(const Corpus& corpus,
                                 const KeywordIndex& index);

// Semantic graph: union-symmetrized (or mutual) cosine KNN over passage
// embeddings, weight = cosine.
KnowledgeGraph build_knn_graph(const Corpus& corpus,
                               const EmbeddingMap& embeddings, int k,
                               bool mutual = false,
                               const std::string& provider_name = "hashing");

// Entity graph: passages are linked when they mention a common entity,
// weight = number of shared entities.
KnowledgeGraph build_entity_graph(const Corpus& corpus,
                                  const EntityExtractor& extractor);

struct MergedSpec {
  const KeywordIndex* keywords = nullptr;    // enables lexical edges
  const EmbeddingMap* embeddings = nullptr;  // enables semantic edges
  int knn_k = 5;
  bool mutual_knn = false;
  std::string provider = "hashing";
  const EntityExtractor* extractor = nullptr;  // enables entity edges
};

// One graph holding every configured edge kind over shared passage nodes.
KnowledgeGraph build_merged_graph(const Corpus& corpus, const MergedSpec& spec);

// Adds page and table nodes plus directed containment edges
// (page -> passage, page -> table) for the corpus the graph was built on.
KnowledgeGraph add_structural_nodes(KnowledgeGraph g, const Corpus& corpus);

struct UpdateContext {
  // Needed for semantic graphs built with a non-hashing provider.
  EmbeddingProvider* provider = nullptr;
  // Overrides the gazetteer recorded in the graph meta.
  const EntityExtractor* extractor = nullptr;
  // Must match the stopword set used at extraction time.
  const StopwordSet* stopwords = nullptr;
};

struct BuildOptions {
  std::string method = "tfidf";  // tfidf | knn | entity | merged
  int passage_budget = 250;
  int keywords_m = 20;
  int knn_k = 5;
  bool mutual_knn = false;
  std::string provider = "hashing";  // hashing | remote
  int dimension = 64;
  std::vector<std::string> gazetteer;
  bool with_structure = false;
  StopwordSet stopwords = default_stopwords();
};

// Splits the corpus and runs the configured construction end to end.
// Merged builds take lexical + semantic edges, plus entity edges when a
// gazetteer is given.
KnowledgeGraph build_graph(Corpus& corpus, const BuildOptions& options);

// Splits the document under the graph's construction parameters and adds
// its nodes and edges without rebuilding existing edges. Inverse of
// remove_document on the node/edge sets.
KnowledgeGraph add_document(const KnowledgeGraph& g, const Document& doc,
                            const UpdateContext& ctx = {});

// Drops the document's nodes and every incident edge.
KnowledgeGraph remove_document(const KnowledgeGraph& g,
                               const std::string& doc_id);

}  // namespace kgp
