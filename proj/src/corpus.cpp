// SPDX-License-Identifier: Apache-2.0
#include "kgp/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgp/errors.hpp"
#include "kgp/text.hpp"

namespace kgp {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const Document* Corpus::find_document(const std::string& doc_id) const {
  for (const auto& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

namespace {

[[noreturn]] void bad_field(const std::string& origin, const std::string& field,
                            const std::string& what) {
  throw ValidationError(origin + ": " + field + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Block parse_block(const json& jb, const std::string& origin,
                  const std::string& field) {
  if (!jb.is_object()) bad_field(origin, field, "must be an object");
  if (!jb.contains("kind") || !jb["kind"].is_string())
    bad_field(origin, field + ".kind", "missing or not a string");
  std::string kind = jb["kind"].get<std::string>();
  Block b;
  if (kind == "text") {
    b.kind = BlockKind::text;
  } else if (kind == "table") {
    b.kind = BlockKind::table;
  } else {
    bad_field(origin, field + ".kind", "must be \"text\" or \"table\"");
  }
  if (!jb.contains("content") || !jb["content"].is_string())
    bad_field(origin, field + ".content", "missing or not a string");
  b.content = jb["content"].get<std::string>();
  if (b.content.empty())
    bad_field(origin, field + ".content", "must be non-empty");
  if (b.kind == BlockKind::table) {
    if (!jb.contains("table_id") || !jb["table_id"].is_number_integer())
      bad_field(origin, field + ".table_id", "required for table blocks");
    int tid = jb["table_id"].get<int>();
    if (tid < 0) bad_field(origin, field + ".table_id", "must be >= 0");
    b.table_id = tid;
  } else if (jb.contains("table_id")) {
    bad_field(origin, field + ".table_id", "only allowed on table blocks");
  }
  return b;
}

Document parse_document(const json& jd, const std::string& origin,
                        const std::string& field) {
  if (!jd.is_object()) bad_field(origin, field, "must be an object");
  Document d;
  if (!jd.contains("doc_id") || !jd["doc_id"].is_string())
    bad_field(origin, field + ".doc_id", "missing or not a string");
  d.doc_id = jd["doc_id"].get<std::string>();
  if (d.doc_id.empty()) bad_field(origin, field + ".doc_id", "must be non-empty");
  if (!jd.contains("title") || !jd["title"].is_string())
    bad_field(origin, field + ".title", "missing or not a string");
  d.title = jd["title"].get<std::string>();
  if (d.title.empty()) bad_field(origin, field + ".title", "must be non-empty");
  if (!jd.contains("pages") || !jd["pages"].is_array())
    bad_field(origin, field + ".pages", "missing or not an array");

  int prev_page = 0;
  std::set<int> table_ids;
  std::size_t pi = 0;
  for (const auto& jp : jd["pages"]) {
    std::string pfield = field + ".pages[" + std::to_string(pi) + "]";
    if (!jp.is_object()) bad_field(origin, pfield, "must be an object");
    Page page;
    if (!jp.contains("page_number") || !jp["page_number"].is_number_integer())
      bad_field(origin, pfield + ".page_number", "missing or not an integer");
    page.page_number = jp["page_number"].get<int>();
    if (page.page_number < 1)
      bad_field(origin, pfield + ".page_number", "must be >= 1");
    if (page.page_number <= prev_page)
      bad_field(origin, pfield + ".page_number", "must be strictly increasing");
    prev_page = page.page_number;
    if (!jp.contains("blocks") || !jp["blocks"].is_array())
      bad_field(origin, pfield + ".blocks", "missing or not an array");
    if (jp["blocks"].empty())
      bad_field(origin, pfield + ".blocks", "must be non-empty");
    std::size_t bi = 0;
    for (const auto& jb : jp["blocks"]) {
      Block b = parse_block(jb, origin,
                            pfield + ".blocks[" + std::to_string(bi) + "]");
      if (b.table_id && !table_ids.insert(*b.table_id).second) {
        bad_field(origin, pfield + ".blocks[" + std::to_string(bi) + "].table_id",
                  "duplicate table_id " + std::to_string(*b.table_id) +
                      " within document " + d.doc_id);
      }
      page.blocks.push_back(std::move(b));
      ++bi;
    }
    d.pages.push_back(std::move(page));
    ++pi;
  }
  return d;
}

Corpus parse_corpus_json(const json& root, const std::string& origin) {
  if (!root.is_object() || !root.contains("documents") ||
      !root["documents"].is_array()) {
    bad_field(origin, "documents", "missing or not an array");
  }
  Corpus c;
  std::set<std::string> seen;
  std::size_t di = 0;
  for (const auto& jd : root["documents"]) {
    Document d = parse_document(jd, origin,
                                "documents[" + std::to_string(di) + "]");
    if (!seen.insert(d.doc_id).second)
      throw DuplicateIdError(origin + ": duplicate doc_id " + d.doc_id);
    c.documents.push_back(std::move(d));
    ++di;
  }
  return c;
}

Document plain_document(const fs::path& file) {
  Document d;
  d.doc_id = file.stem().string();
  d.title = file.stem().string();
  std::string text = read_file(file.string());
  if (!tokenize_ws(text).empty()) {
    Page page;
    page.page_number = 1;
    page.blocks.push_back(Block{BlockKind::text, text, std::nullopt});
    d.pages.push_back(std::move(page));
  }
  return d;
}

}  // namespace

Corpus corpus_from_json_string(const std::string& data,
                               const std::string& origin) {
  json root;
  try {
    root = json::parse(data);
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": invalid JSON: " + e.what());
  }
  return parse_corpus_json(root, origin);
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  if (format == CorpusFormat::structured) {
    return corpus_from_json_string(read_file(path), path);
  }
  Corpus c;
  fs::path p(path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && e.path().extension() == ".txt")
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::set<std::string> seen;
    for (const auto& f : files) {
      Document d = plain_document(f);
      if (!seen.insert(d.doc_id).second)
        throw DuplicateIdError(path + ": duplicate doc_id " + d.doc_id);
      c.documents.push_back(std::move(d));
    }
  } else if (fs::is_regular_file(p)) {
    c.documents.push_back(plain_document(p));
  } else {
    throw InputError("no such file or directory: " + path);
  }
  return c;
}

std::string corpus_to_json_string(const Corpus& corpus) {
  ordered_json root;
  root["documents"] = ordered_json::array();
  for (const auto& d : corpus.documents) {
    ordered_json jd;
    jd["doc_id"] = d.doc_id;
    jd["title"] = d.title;
    jd["pages"] = ordered_json::array();
    for (const auto& p : d.pages) {
      ordered_json jp;
      jp["page_number"] = p.page_number;
      jp["blocks"] = ordered_json::array();
      for (const auto& b : p.blocks) {
        ordered_json jb;
        jb["kind"] = b.kind == BlockKind::table ? "table" : "text";
        jb["content"] = b.content;
        if (b.table_id) jb["table_id"] = *b.table_id;
        jp["blocks"].push_back(std::move(jb));
      }
      jd["pages"].push_back(std::move(jp));
    }
    root["documents"].push_back(std::move(jd));
  }
  return root.dump(2);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << corpus_to_json_string(corpus) << "\n";
}

std::vector<Passage> split_document(const Document& doc, int budget) {
  if (budget < 1) throw InputError("passage budget must be >= 1");
  std::vector<Passage> out;
  int ordinal = 0;
  bool any_tokens = false;
  for (const auto& page : doc.pages) {
    std::vector<std::string> toks;
    for (const auto& b : page.blocks) {
      if (b.kind != BlockKind::text) continue;
      for (auto& t : tokenize_ws(b.content)) toks.push_back(std::move(t));
    }
    if (toks.empty()) continue;
    any_tokens = true;
    std::size_t i = 0;
    const std::size_t n = toks.size();
    const std::size_t w = static_cast<std::size_t>(budget);
    while (i < n) {
      std::size_t end = std::min(i + w, n);
      std::size_t cut = end;
      if (end < n) {
        // Prefer the latest sentence boundary inside the window.
        for (std::size_t j = end; j > i; --j) {
          if (ends_sentence(toks[j - 1])) {
            cut = j;
            break;
          }
        }
      }
      Passage p;
      p.passage_id = doc.doc_id + "#" + std::to_string(ordinal++);
      p.doc_id = doc.doc_id;
      p.page_number = page.page_number;
      p.token_count = static_cast<int>(cut - i);
      std::vector<std::string> window(toks.begin() + i, toks.begin() + cut);
      p.text = join(window);
      out.push_back(std::move(p));
      i = cut;
    }
  }
  if (!any_tokens) throw EmptyDocumentError("document " + doc.doc_id +
                                            " has no text tokens");
  return out;
}

void split_corpus(Corpus& corpus, int budget) {
  if (budget < 1) throw InputError("passage budget must be >= 1");
  const int nd = static_cast<int>(corpus.documents.size());
  std::vector<std::vector<Passage>> per_doc(nd);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < nd; ++i) {
    try {
      per_doc[i] = split_document(corpus.documents[i], budget);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  corpus.passages.clear();
  for (auto& v : per_doc) {
    for (auto& p : v) corpus.passages.push_back(std::move(p));
  }
  corpus.passage_budget = budget;
}

}  // namespace kgp
