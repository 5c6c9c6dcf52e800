// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgp/corpus.hpp"
#include "kgp/errors.hpp"
#include "kgp/keywords.hpp"

using namespace kgp;

namespace {

// Local tokenization so the oracle shares no code with the extractor.
std::vector<std::string> naive_terms(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    std::size_t b = 0, e = tok.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
    std::string t;
    for (std::size_t i = b; i < e; ++i)
      t.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(tok[i]))));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// Straight-line tf-idf keyword selection, recomputed from scratch.
KeywordIndex oracle_keywords(const Corpus& corpus, int m,
                             const StopwordSet& stopwords) {
  std::map<std::string, std::map<std::string, int>> tf;  // doc -> term -> tf
  for (const auto& doc : corpus.documents) tf[doc.doc_id];
  for (const auto& p : corpus.passages) {
    for (const auto& t : naive_terms(p.text)) {
      if (!stopwords.count(t)) ++tf[p.doc_id][t];
    }
  }
  std::map<std::string, int> df;
  for (const auto& [_, terms_of_doc] : tf) {
    for (const auto& [term, cnt] : terms_of_doc) ++df[term];
  }
  const int nd = static_cast<int>(corpus.documents.size());

  KeywordIndex index;
  index.m = m;
  for (const auto& doc : corpus.documents) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& [term, cnt] : tf[doc.doc_id]) {
      if (df[term] == nd) continue;
      scored.emplace_back(cnt * std::log(double(nd) / df[term]), term);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::set<std::string> kws;
    for (int i = 0; i < m && i < static_cast<int>(scored.size()); ++i)
      kws.insert(scored[i].second);
    for (const auto& t : naive_terms(doc.title)) kws.insert(t);
    index.keyword_space.insert(kws.begin(), kws.end());
    index.per_document_keywords[doc.doc_id] = std::move(kws);
  }
  for (const auto& p : corpus.passages) {
    std::set<std::string> pk;
    for (const auto& t : naive_terms(p.text)) {
      if (index.keyword_space.count(t)) pk.insert(t);
    }
    index.per_passage_keywords[p.passage_id] = pk;
  }
  return index;
}

Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>&
                       titled_texts,
                   int budget = 6) {
  Corpus c;
  int di = 0;
  for (const auto& [title, text] : titled_texts) {
    Document doc;
    doc.doc_id = "d" + std::to_string(di++);
    doc.title = title;
    Page page;
    page.page_number = 1;
    page.blocks.push_back({BlockKind::text, text, 0});
    doc.pages.push_back(page);
    c.documents.push_back(doc);
  }
  split_corpus(c, budget);
  return c;
}

Corpus random_corpus(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {
      "river",  "bridge", "harbor", "signal", "quartz", "meadow",
      "turbine", "valley", "basalt", "copper", "lantern", "orchard",
      "the",    "of",     "and",    "a"};
  std::uniform_int_distribution<int> n_docs(1, 6);
  std::uniform_int_distribution<int> n_words(3, 30);
  std::uniform_int_distribution<int> word(0, static_cast<int>(vocab.size()) - 1);
  std::vector<std::pair<std::string, std::string>> docs;
  int nd = n_docs(rng);
  for (int d = 0; d < nd; ++d) {
    std::string text;
    int nw = n_words(rng);
    for (int w = 0; w < nw; ++w) {
      if (!text.empty()) text += ' ';
      text += vocab[word(rng)];
    }
    docs.emplace_back(vocab[word(rng)] + " title", text);
  }
  return make_corpus(docs, 8);
}

}  // namespace

TEST_CASE("hand-computed two-document case") {
  Corpus c = make_corpus({{"alpha", "ohio ohio river"}, {"beta", "ohio state fair"}});
  KeywordIndex idx = extract_keywords(c, 1);
  // "ohio" appears in both documents, so idf = 0 and it is dropped.
  CHECK(idx.per_document_keywords["d0"] == std::set<std::string>{"alpha", "river"});
  // state and fair tie on score; "fair" wins alphabetically.
  CHECK(idx.per_document_keywords["d1"] == std::set<std::string>{"beta", "fair"});
  CHECK(idx.keyword_space ==
        std::set<std::string>{"alpha", "beta", "fair", "river"});
  CHECK(idx.per_passage_keywords["d0#0"] == std::set<std::string>{"river"});
  CHECK(idx.per_passage_keywords["d1#0"] == std::set<std::string>{"fair"});
}

TEST_CASE("single-document corpus keeps only title terms") {
  Corpus c = make_corpus({{"solo title", "every term shares one document"}});
  KeywordIndex idx = extract_keywords(c, 5);
  CHECK(idx.per_document_keywords["d0"] ==
        std::set<std::string>{"solo", "title"});
}

TEST_CASE("title terms bypass the stopword filter") {
  Corpus c = make_corpus({{"The Of", "ordinary words flow here"},
                          {"other", "different words sit there"}});
  KeywordIndex idx = extract_keywords(c, 2);
  CHECK(idx.per_document_keywords["d0"].count("the") == 1);
  CHECK(idx.per_document_keywords["d0"].count("of") == 1);
}

TEST_CASE("stopwords never become tf-idf keywords") {
  Corpus c = make_corpus({{"t1", "the the the quartz"}, {"t2", "of of basalt"}});
  KeywordIndex idx = extract_keywords(c, 10);
  CHECK(idx.per_document_keywords["d0"].count("the") == 0);
  CHECK(idx.per_document_keywords["d0"].count("quartz") == 1);
  CHECK(idx.per_document_keywords["d1"].count("of") == 0);
}

TEST_CASE("m caps the tf-idf keywords per document") {
  Corpus c = make_corpus({{"x", "ant bee cat dog elk fox"}, {"y", "gnu hen ibis"}});
  KeywordIndex idx1 = extract_keywords(c, 1);
  KeywordIndex idx4 = extract_keywords(c, 4);
  // One keyword plus the title term.
  CHECK(idx1.per_document_keywords["d0"].size() == 2);
  CHECK(idx4.per_document_keywords["d0"].size() == 5);
  // All six terms tie; ranking is alphabetical.
  CHECK(idx1.per_document_keywords["d0"].count("ant") == 1);
}

TEST_CASE("bad inputs are rejected") {
  Corpus empty;
  CHECK_THROWS_AS(extract_keywords(empty, 5), EmptyCorpusError);

  Corpus unsplit = make_corpus({{"a", "text"}});
  unsplit.passages.clear();
  CHECK_THROWS_AS(extract_keywords(unsplit, 5), EmptyCorpusError);

  Corpus c = make_corpus({{"a", "some text"}});
  CHECK_THROWS_AS(extract_keywords(c, 0), InputError);

  Corpus orphan = make_corpus({{"a", "some text"}});
  orphan.passages[0].doc_id = "ghost";
  orphan.passages[0].passage_id = "ghost#0";
  CHECK_THROWS_AS(extract_keywords(orphan, 5), InconsistentInputError);
}

TEST_CASE("matches the independent oracle on random corpora") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    Corpus c = random_corpus(rng);
    for (int m : {1, 2, 5}) {
      KeywordIndex got = extract_keywords(c, m);
      KeywordIndex want = oracle_keywords(c, m, default_stopwords());
      CAPTURE(trial);
      CAPTURE(m);
      CHECK(got.keyword_space == want.keyword_space);
      CHECK(got.per_document_keywords == want.per_document_keywords);
      CHECK(got.per_passage_keywords == want.per_passage_keywords);
    }
  }
}
