// SPDX-License-Identifier: Apache-2.0
#include "kgp/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kgp/build.hpp"
#include "kgp/errors.hpp"
#include "kgp/text.hpp"

namespace kgp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string>& filler_vocab() {
  static const std::vector<std::string> kVocab = {
      "harbor", "lantern", "meadow", "quarry", "thicket", "saddle",
      "ember",  "furrow",  "gully",  "hollow", "inlet",   "juniper",
      "kestrel", "ledger", "mantle", "nocturne", "orchard", "paddock",
      "quiver", "ramble", "sluice", "tundra", "upland",  "vellum",
      "wharf",  "yonder", "zephyr", "bramble", "cistern", "drover",
      "eddy",   "fathom", "garnet", "heath",   "isthmus", "jetty",
      "knoll",  "lichen", "moraine", "nettle",
  };
  return kVocab;
}

std::string doc_id_for(int i) {
  std::ostringstream ss;
  ss << "d";
  if (i < 10) ss << "0";
  ss << i;
  return ss.str();
}

// 8-14 filler tokens with the given tokens planted at random positions;
// ends with a period so passages stay sentence-shaped.
std::string make_text(std::mt19937_64& rng,
                      const std::vector<std::string>& planted) {
  const auto& vocab = filler_vocab();
  std::uniform_int_distribution<int> len_dist(8, 14);
  std::uniform_int_distribution<std::size_t> word_dist(0, vocab.size() - 1);
  int n_fill = len_dist(rng);
  std::vector<std::string> toks;
  for (int i = 0; i < n_fill; ++i) toks.push_back(vocab[word_dist(rng)]);
  for (const auto& p : planted) {
    std::uniform_int_distribution<std::size_t> pos_dist(0, toks.size());
    toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(pos_dist(rng)), p);
  }
  toks.back() += ".";
  return join(toks);
}

std::vector<int> sample_distinct(std::mt19937_64& rng, int n, int k) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

}  // namespace

SynthResult generate_synthetic(const SynthSpec& spec) {
  if (spec.num_docs < 2) throw InputError("num_docs must be >= 2");
  if (spec.chain_length < 2) throw InputError("chain_length must be >= 2");
  if (spec.num_docs < spec.chain_length)
    throw InputError("num_docs must be >= chain_length so chain passages "
                     "land in distinct documents");
  if (spec.distractor_count < 0)
    throw InputError("distractor_count must be >= 0");
  if (spec.num_questions < 1) throw InputError("num_questions must be >= 1");

  std::mt19937_64 rng(spec.seed);

  // Per-document passage text lists; positions become passage ordinals.
  std::vector<std::vector<std::string>> doc_texts(
      static_cast<std::size_t>(spec.num_docs));
  auto assign = [&](int doc, const std::string& text) {
    doc_texts[static_cast<std::size_t>(doc)].push_back(text);
    return doc_id_for(doc) + "#" +
           std::to_string(doc_texts[static_cast<std::size_t>(doc)].size() - 1);
  };

  std::vector<QAInstance> questions;
  for (int q = 0; q < spec.num_questions; ++q) {
    const std::string qs = std::to_string(q);
    QAInstance inst;
    inst.answer = "ans" + qs;

    if (spec.pattern == ChainPattern::bridge) {
      std::vector<int> docs = sample_distinct(rng, spec.num_docs,
                                              spec.chain_length);
      std::vector<std::string> keys;
      for (int j = 0; j < spec.chain_length; ++j)
        keys.push_back("key" + qs + "x" + std::to_string(j));
      for (int j = 0; j < spec.chain_length; ++j) {
        std::vector<std::string> planted = {keys[static_cast<std::size_t>(j)]};
        if (j + 1 < spec.chain_length) {
          planted.push_back(keys[static_cast<std::size_t>(j) + 1]);
        } else {
          planted.push_back(inst.answer);
        }
        inst.sf_ids.push_back(
            assign(docs[static_cast<std::size_t>(j)],
                   make_text(rng, planted)));
      }
      inst.question = "Which fact does the trail starting at " + keys[0] +
                      " finally reveal?";
    } else {
      // Two branches sharing the answer document at the end.
      int len_a = (spec.chain_length + 1) / 2;
      int len_b = spec.chain_length - len_a;
      std::vector<int> docs = sample_distinct(rng, spec.num_docs,
                                              spec.chain_length);
      std::string head_a = "key" + qs + "a0";
      std::string head_b = "key" + qs + "b0";
      auto branch = [&](const std::string& tag, int len, int doc_off,
                        bool carries_answer) {
        std::vector<std::string> keys;
        for (int j = 0; j < len; ++j)
          keys.push_back("key" + qs + tag + std::to_string(j));
        for (int j = 0; j < len; ++j) {
          std::vector<std::string> planted = {keys[static_cast<std::size_t>(j)]};
          if (j + 1 < len) {
            planted.push_back(keys[static_cast<std::size_t>(j) + 1]);
          } else if (carries_answer) {
            planted.push_back(inst.answer);
          }
          inst.sf_ids.push_back(
              assign(docs[static_cast<std::size_t>(doc_off + j)],
                     make_text(rng, planted)));
        }
      };
      branch("a", len_a, 0, true);
      if (len_b > 0) branch("b", len_b, len_a, false);
      inst.question = "Comparing the records at " + head_a + " and " + head_b +
                      ", which value do they settle on?";
    }
    questions.push_back(std::move(inst));
  }

  for (int i = 0; i < spec.distractor_count; ++i) {
    int doc = static_cast<int>(
        std::uniform_int_distribution<int>(0, spec.num_docs - 1)(rng));
    assign(doc, make_text(rng, {"junk" + std::to_string(i)}));
  }
  // No document may end up empty.
  for (int d = 0; d < spec.num_docs; ++d) {
    if (doc_texts[static_cast<std::size_t>(d)].empty())
      assign(d, make_text(rng, {"pad" + std::to_string(d)}));
  }

  SynthResult out;
  for (int d = 0; d < spec.num_docs; ++d) {
    Document doc;
    doc.doc_id = doc_id_for(d);
    doc.title = "topic" + std::to_string(d);
    int page = 1;
    for (const auto& text : doc_texts[static_cast<std::size_t>(d)]) {
      Page p;
      p.page_number = page++;
      p.blocks.push_back(Block{BlockKind::text, text, std::nullopt});
      doc.pages.push_back(std::move(p));
    }
    out.corpus.documents.push_back(std::move(doc));
  }
  split_corpus(out.corpus, 250);
  out.questions = std::move(questions);
  return out;
}

SynthResult generate_structured(const StructuredSynthSpec& spec) {
  if (spec.num_docs < 1) throw InputError("num_docs must be >= 1");
  if (spec.pages_per_doc < 1) throw InputError("pages_per_doc must be >= 1");
  if (spec.tables_per_doc < 0) throw InputError("tables_per_doc must be >= 0");
  if (spec.tables_per_doc > spec.pages_per_doc)
    throw InputError("tables_per_doc must not exceed pages_per_doc");

  std::mt19937_64 rng(spec.seed);
  SynthResult out;
  int next_page = 1;
  int next_table = 0;
  for (int d = 0; d < spec.num_docs; ++d) {
    Document doc;
    doc.doc_id = doc_id_for(d);
    doc.title = "survey" + std::to_string(d);
    for (int p = 0; p < spec.pages_per_doc; ++p) {
      Page page;
      page.page_number = next_page++;
      std::string marker = "pagemark" + std::to_string(page.page_number);
      std::string text = make_text(rng, {marker});
      page.blocks.push_back(Block{BlockKind::text, text, std::nullopt});

      if (p < spec.tables_per_doc) {
        int tid = next_table++;
        std::uniform_int_distribution<int> flow(10, 999);
        std::string grid = "station\tflow\n";
        grid += "s" + std::to_string(tid) + "a\t" + std::to_string(flow(rng)) +
                "\n";
        grid += "s" + std::to_string(tid) + "b\t" + std::to_string(flow(rng));
        page.blocks.push_back(Block{BlockKind::table, grid, tid});

        QAInstance tq;
        tq.question = "What does table " + std::to_string(tid) + " show?";
        tq.structural_gold = markdown_table(grid);
        out.questions.push_back(std::move(tq));
      }

      QAInstance pq;
      pq.question =
          "What is on page " + std::to_string(page.page_number) + "?";
      pq.structural_gold = text;
      out.questions.push_back(std::move(pq));

      doc.pages.push_back(std::move(page));
    }
    out.corpus.documents.push_back(std::move(doc));
  }
  split_corpus(out.corpus, 250);
  return out;
}

void save_qa_jsonl(const std::vector<QAInstance>& questions,
                   const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  for (const auto& q : questions) {
    ordered_json j;
    j["question"] = q.question;
    j["answer"] = q.answer;
    j["sf_ids"] = q.sf_ids;
    if (!q.structural_gold.empty()) j["structural_gold"] = q.structural_gold;
    f << j.dump() << "\n";
  }
}

std::vector<QAInstance> load_qa_jsonl(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::vector<QAInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      QAInstance q;
      q.question = j.at("question").get<std::string>();
      q.answer = j.at("answer").get<std::string>();
      q.sf_ids = j.value("sf_ids", std::vector<std::string>());
      q.structural_gold = j.value("structural_gold", std::string());
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " +
                            e.what());
    }
  }
  return out;
}

}  // namespace kgp
