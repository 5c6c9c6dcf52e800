// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kgp {

enum class BlockKind { text, table };

struct Block {
  BlockKind kind = BlockKind::text;
  // Text blocks: prose. Table blocks: cell grid, rows separated by
  // newlines, cells by tabs.
  std::string content;
  std::optional<int> table_id;
};

struct Page {
  int page_number = 1;
  std::vector<Block> blocks;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::vector<Page> pages;
};

struct Passage {
  std::string passage_id;  // "{doc_id}#{ordinal}"
  std::string doc_id;
  std::optional<int> page_number;
  std::string text;
  int token_count = 0;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<Passage> passages;  // filled by split_corpus
  int passage_budget = 250;

  const Document* find_document(const std::string& doc_id) const;
};

enum class CorpusFormat { structured, plain };

// Structured: one JSON file. Plain: a .txt file (one document) or a
// directory of .txt files loaded in filename order.
Corpus load_corpus(const std::string& path,
                   CorpusFormat format = CorpusFormat::structured);

// Parses structured corpus JSON from a string; `origin` names the source
// in error messages.
Corpus corpus_from_json_string(const std::string& data,
                               const std::string& origin);

std::string corpus_to_json_string(const Corpus& corpus);

void save_corpus(const Corpus& corpus, const std::string& path);

// Splits one document into token-budgeted passages, preferring sentence
// boundaries when a window must be cut. Table blocks are skipped.
std::vector<Passage> split_document(const Document& doc, int budget);

// Splits every document (parallel across documents) and stores the
// concatenated passages on the corpus in document order.
void split_corpus(Corpus& corpus, int budget = 250);

}  // namespace kgp
