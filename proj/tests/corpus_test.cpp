// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kgp/corpus.hpp"
#include "kgp/errors.hpp"
#include "kgp/text.hpp"

using namespace kgp;
namespace fs = std::filesystem;

namespace {

const char* kCorpusJson = R"({
  "documents": [
    {
      "doc_id": "alpha",
      "title": "Alpha Doc",
      "pages": [
        {"page_number": 1, "blocks": [
          {"kind": "text", "content": "First sentence here. Second sentence follows."},
          {"kind": "table", "table_id": 0, "content": "h1\th2\nv1\tv2"}
        ]},
        {"page_number": 2, "blocks": [
          {"kind": "text", "content": "Page two text."}
        ]}
      ]
    },
    {
      "doc_id": "beta",
      "title": "Beta Doc",
      "pages": [
        {"page_number": 1, "blocks": [
          {"kind": "text", "content": "Beta has one page only."}
        ]}
      ]
    }
  ]
})";

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "kgp_corpus_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Document text_doc(const std::string& id, const std::string& text) {
  Document doc;
  doc.doc_id = id;
  doc.title = id;
  Page page;
  page.page_number = 1;
  page.blocks.push_back({BlockKind::text, text, 0});
  doc.pages.push_back(page);
  return doc;
}

}  // namespace

TEST_CASE("structured corpus parses documents, pages, and tables") {
  Corpus c = corpus_from_json_string(kCorpusJson, "test");
  REQUIRE(c.documents.size() == 2);
  const Document& alpha = c.documents[0];
  CHECK(alpha.doc_id == "alpha");
  CHECK(alpha.title == "Alpha Doc");
  REQUIRE(alpha.pages.size() == 2);
  REQUIRE(alpha.pages[0].blocks.size() == 2);
  CHECK(alpha.pages[0].blocks[0].kind == BlockKind::text);
  CHECK(alpha.pages[0].blocks[1].kind == BlockKind::table);
  CHECK(alpha.pages[0].blocks[1].table_id == 0);
  CHECK(c.find_document("beta") != nullptr);
  CHECK(c.find_document("gamma") == nullptr);
}

TEST_CASE("schema violations name the offending field") {
  auto parse = [](const std::string& body) {
    return corpus_from_json_string(body, "test");
  };
  CHECK_THROWS_AS(parse("not json"), ValidationError);
  CHECK_THROWS_AS(parse(R"({"documents": [{}]})"), ValidationError);
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "", "title": "t", "pages": []}]})"),
      ValidationError);
  // Page numbers must start at >= 1 and strictly increase.
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 0, "blocks": [{"kind": "text", "content": "x"}]}
      ]}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 2, "blocks": [{"kind": "text", "content": "x"}]},
        {"page_number": 2, "blocks": [{"kind": "text", "content": "y"}]}
      ]}]})"),
      ValidationError);
  // Tables need a table_id, unique within the document.
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 1, "blocks": [{"kind": "table", "content": "a\tb"}]}
      ]}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 1, "blocks": [
          {"kind": "table", "table_id": 3, "content": "a\tb"},
          {"kind": "table", "table_id": 3, "content": "c\td"}
        ]}
      ]}]})"),
      ValidationError);
  // Empty block content and unknown kinds are rejected.
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 1, "blocks": [{"kind": "text", "content": ""}]}
      ]}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse(R"({"documents": [{"doc_id": "d", "title": "t", "pages": [
        {"page_number": 1, "blocks": [{"kind": "figure", "content": "x"}]}
      ]}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse(R"({"documents": [
        {"doc_id": "d", "title": "t", "pages": [
          {"page_number": 1, "blocks": [{"kind": "text", "content": "x"}]}]},
        {"doc_id": "d", "title": "t2", "pages": [
          {"page_number": 1, "blocks": [{"kind": "text", "content": "y"}]}]}
      ]})"),
      DuplicateIdError);
}

TEST_CASE("validation errors carry the origin name") {
  try {
    corpus_from_json_string(R"({"documents": "nope"})", "myfile.json");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("myfile.json") != std::string::npos);
  }
}

TEST_CASE("corpus json round-trips") {
  Corpus c = corpus_from_json_string(kCorpusJson, "test");
  std::string once = corpus_to_json_string(c);
  Corpus again = corpus_from_json_string(once, "round");
  CHECK(corpus_to_json_string(again) == once);
}

TEST_CASE("save and load through files") {
  fs::path dir = temp_dir();
  Corpus c = corpus_from_json_string(kCorpusJson, "test");
  std::string path = (dir / "corpus.json").string();
  save_corpus(c, path);
  Corpus loaded = load_corpus(path);
  CHECK(corpus_to_json_string(loaded) == corpus_to_json_string(c));
  CHECK_THROWS_AS(load_corpus((dir / "absent.json").string()), InputError);
}

TEST_CASE("plain format loads a txt file or a directory of them") {
  fs::path dir = temp_dir();
  std::ofstream(dir / "zebra.txt") << "Zebra text body.";
  std::ofstream(dir / "apple.txt") << "Apple text body.";
  Corpus one = load_corpus((dir / "apple.txt").string(), CorpusFormat::plain);
  REQUIRE(one.documents.size() == 1);
  CHECK(one.documents[0].doc_id == "apple");
  CHECK(one.documents[0].title == "apple");
  REQUIRE(one.documents[0].pages.size() == 1);
  CHECK(one.documents[0].pages[0].blocks.at(0).content == "Apple text body.");

  Corpus many = load_corpus(dir.string(), CorpusFormat::plain);
  REQUIRE(many.documents.size() == 2);
  // Filename order, not discovery order.
  CHECK(many.documents[0].doc_id == "apple");
  CHECK(many.documents[1].doc_id == "zebra");
}

TEST_CASE("split_document windows tokens under the budget") {
  Document doc = text_doc("d", "one two three four five six seven");
  auto passages = split_document(doc, 3);
  REQUIRE(passages.size() == 3);
  CHECK(passages[0].passage_id == "d#0");
  CHECK(passages[1].passage_id == "d#1");
  CHECK(passages[2].passage_id == "d#2");
  CHECK(passages[0].text == "one two three");
  CHECK(passages[1].text == "four five six");
  CHECK(passages[2].text == "seven");
  for (const auto& p : passages) {
    CHECK(p.token_count <= 3);
    CHECK(p.doc_id == "d");
    CHECK(p.page_number == 1);
  }
}

TEST_CASE("split_document prefers the latest sentence boundary in a window") {
  Document doc = text_doc("d", "Short one. Then a much longer tail comes");
  auto passages = split_document(doc, 5);
  REQUIRE(passages.size() >= 2);
  // The first window holds 5 tokens but ends at the period instead.
  CHECK(passages[0].text == "Short one.");
  CHECK(passages[1].text == "Then a much longer tail");
}

TEST_CASE("split_document skips table blocks and rejects empty docs") {
  Document doc = text_doc("d", "visible text");
  doc.pages[0].blocks.push_back({BlockKind::table, "a\tb\nc\td", 0});
  auto passages = split_document(doc, 10);
  REQUIRE(passages.size() == 1);
  CHECK(passages[0].text == "visible text");

  Document empty;
  empty.doc_id = "e";
  empty.title = "e";
  CHECK_THROWS_AS(split_document(empty, 10), EmptyDocumentError);

  Document tables_only = text_doc("t", "x");
  tables_only.pages[0].blocks[0].kind = BlockKind::table;
  CHECK_THROWS_AS(split_document(tables_only, 10), EmptyDocumentError);
}

TEST_CASE("split_document rejects a non-positive budget") {
  Document doc = text_doc("d", "words here");
  CHECK_THROWS_AS(split_document(doc, 0), InputError);
  CHECK_THROWS_AS(split_document(doc, -4), InputError);
}

TEST_CASE("passages restart numbering per page but not per document") {
  Document doc = text_doc("d", "page one words");
  Page second;
  second.page_number = 2;
  second.blocks.push_back({BlockKind::text, "page two words", 0});
  doc.pages.push_back(second);
  auto passages = split_document(doc, 50);
  REQUIRE(passages.size() == 2);
  CHECK(passages[0].passage_id == "d#0");
  CHECK(passages[0].page_number == 1);
  CHECK(passages[1].passage_id == "d#1");
  CHECK(passages[1].page_number == 2);
}

TEST_CASE("split_corpus concatenates passages in document order") {
  Corpus c = corpus_from_json_string(kCorpusJson, "test");
  split_corpus(c, 4);
  CHECK(c.passage_budget == 4);
  REQUIRE_FALSE(c.passages.empty());
  // Document order preserved: all alpha passages precede beta ones.
  bool saw_beta = false;
  for (const auto& p : c.passages) {
    if (p.doc_id == "beta") saw_beta = true;
    if (saw_beta) CHECK(p.doc_id == "beta");
  }
  for (const auto& p : c.passages) CHECK(p.token_count <= 4);
}
