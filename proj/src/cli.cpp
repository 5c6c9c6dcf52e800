// SPDX-License-Identifier: Apache-2.0
#include "kgp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgp/agents.hpp"
#include "kgp/build.hpp"
#include "kgp/corpus.hpp"
#include "kgp/errors.hpp"
#include "kgp/graph_io.hpp"
#include "kgp/remote.hpp"
#include "kgp/service.hpp"
#include "kgp/sweep.hpp"
#include "kgp/synth.hpp"
#include "kgp/traverse.hpp"

namespace kgp {

namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

StopwordSet stopwords_from_file(const std::string& path) {
  StopwordSet set;
  for (const auto& line : read_lines(path)) set.insert(lowercase(line));
  return set;
}

struct BuildArgs {
  std::string corpus_path;
  std::string format = "structured";
  std::string out;
  BuildOptions options;
  std::string embed = "hash";
  std::string gazetteer_file;
  std::string stopwords_file;
};

int run_build(const BuildArgs& args) {
  BuildOptions opts = args.options;
  opts.provider = args.embed == "remote" ? "remote" : "hashing";
  if (!args.gazetteer_file.empty())
    opts.gazetteer = read_lines(args.gazetteer_file);
  if (!args.stopwords_file.empty())
    opts.stopwords = stopwords_from_file(args.stopwords_file);
  Corpus corpus = load_corpus(args.corpus_path,
                              args.format == "plain" ? CorpusFormat::plain
                                                     : CorpusFormat::structured);
  KnowledgeGraph g = build_graph(corpus, opts);
  save_graph(g, args.out);
  GraphStats s = graph_stats(g);
  std::cout << "wrote " << args.out << ": " << s.num_nodes << " nodes, "
            << s.num_edges << " edges, avg degree " << s.avg_degree << "\n";
  return 0;
}

struct RetrieveArgs {
  std::string graph_path;
  std::string question;
  std::string agent = "tfidf";
  TraversalConfig config;
  std::string match_mode = "text";
  std::string text_score = "tfidf";
  int dimension = 64;
  std::string embed = "hash";
  std::string template_text;
  bool no_context = false;
  std::vector<std::string> gold;
  bool as_json = false;
  std::string mode = "auto";
};

std::unique_ptr<Matcher> make_matcher(const RetrieveArgs& args,
                                      const KnowledgeGraph& g,
                                      std::unique_ptr<EmbeddingProvider>& keeper) {
  if (args.match_mode == "encoder") {
    if (args.embed == "remote") {
      keeper = std::make_unique<RemoteEmbeddingProvider>(
          RemoteConfig::embed_from_env(), args.dimension);
    } else {
      keeper = std::make_unique<HashingProvider>(args.dimension);
    }
    return make_encoder_matcher(*keeper);
  }
  return make_text_matcher(g, args.text_score == "edit" ? TextScore::edit
                                                        : TextScore::tfidf);
}

int run_retrieve(const RetrieveArgs& args) {
  KnowledgeGraph g = load_graph(args.graph_path);
  Question q = classify_question(args.question);
  if (args.mode == "content") q.kind = QuestionKind::content;
  if (args.mode == "structural") q.kind = QuestionKind::structural;

  RetrievalResult result;
  if (q.kind == QuestionKind::structural) {
    result = retrieve_structural(g, q);
  } else {
    std::unique_ptr<EmbeddingProvider> keeper;
    std::unique_ptr<Agent> agent;
    if (args.agent == "oracle") {
      if (args.gold.empty())
        throw InputError("the oracle agent needs --gold texts");
      agent = std::make_unique<OracleAgent>(args.gold);
    } else if (args.agent == "remote") {
      agent = std::make_unique<RemoteLLMAgent>(
          CompletionClient(RemoteConfig::llm_from_env()),
          make_matcher(args, g, keeper));
    } else {
      agent = std::make_unique<TfIdfAgent>(make_matcher(args, g, keeper));
    }
    result = retrieve(g, q, *agent, args.config);
  }

  std::string prompt = format_prompt(
      q, result, args.no_context ? PromptMode::no_context : PromptMode::with_context,
      args.template_text);

  if (args.as_json) {
    json paths = json::array();
    for (const auto& p : result.paths)
      paths.push_back(json{{"node_ids", p.node_ids}, {"evidence", p.evidence}});
    json out{{"kind", q.kind == QuestionKind::structural ? "structural" : "content"},
             {"context_passages", result.context_passages},
             {"context_texts", result.context_texts},
             {"structural_payloads", result.structural_payloads},
             {"paths", paths},
             {"prompt", prompt},
             {"seed_fallback", result.seed_fallback},
             {"budget_shortfall", result.budget_shortfall}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << prompt << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::string corpus_path;
  std::string qa_path;
  std::string method = "knn";
  std::vector<int> grid;
  std::string out;
  SweepOptions options;
};

int run_bench(const BenchArgs& args) {
  Corpus corpus = load_corpus(args.corpus_path);
  split_corpus(corpus, corpus.passage_budget);
  std::vector<QAInstance> questions = load_qa_jsonl(args.qa_path);
  std::vector<SweepRow> rows =
      density_sweep(corpus, questions, args.method, args.grid, args.options);
  std::string csv = sweep_csv(rows);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    write_sweep_csv(rows, args.out);
    std::cout << "wrote " << args.out << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

struct GenArgs {
  SynthSpec spec;
  StructuredSynthSpec structured_spec;
  bool structured = false;
  std::string pattern = "bridge";
  std::string out;
  std::string qa_out;
};

int run_gen(const GenArgs& args) {
  SynthResult result;
  if (args.structured) {
    result = generate_structured(args.structured_spec);
  } else {
    SynthSpec spec = args.spec;
    spec.pattern = args.pattern == "compare" ? ChainPattern::compare
                                             : ChainPattern::bridge;
    result = generate_synthetic(spec);
  }
  save_corpus(result.corpus, args.out);
  if (!args.qa_out.empty()) save_qa_jsonl(result.questions, args.qa_out);
  std::cout << "wrote " << args.out << " (" << result.corpus.documents.size()
            << " documents, " << result.questions.size() << " questions)\n";
  return 0;
}

int run_stats(const std::string& graph_path, bool as_json) {
  KnowledgeGraph g = load_graph(graph_path);
  GraphStats s = graph_stats(g);
  if (as_json) {
    std::cout << stats_to_json_string(s) << "\n";
    return 0;
  }
  std::cout << "nodes:             " << s.num_nodes << "\n"
            << "passage nodes:     " << s.num_passage_nodes << "\n"
            << "similarity edges:  " << s.num_edges << "\n"
            << "containment edges: " << s.containment_edges << "\n"
            << "density:           " << s.density << "\n"
            << "avg degree:        " << s.avg_degree << "\n";
  return 0;
}

int run_serve(ServiceConfig cfg) {
  Service service(std::move(cfg));
  int port = service.start();
  std::cout << "listening on port " << port << "\n" << std::flush;
  // Foreground until interrupted.
  while (true) std::this_thread::sleep_for(std::chrono::seconds(1));
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"knowledge graph retrieval over document collections"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "build a graph from a corpus");
  build->add_option("--corpus", build_args.corpus_path, "corpus file or directory")
      ->required();
  build->add_option("--format", build_args.format, "structured|plain")
      ->check(CLI::IsMember({"structured", "plain"}));
  build->add_option("--method", build_args.options.method,
                    "tfidf|knn|entity|merged")
      ->check(CLI::IsMember({"tfidf", "knn", "entity", "merged"}));
  build->add_option("--keywords", build_args.options.keywords_m,
                    "keywords per document");
  build->add_option("--knn-k", build_args.options.knn_k, "neighbors per passage");
  build->add_flag("--mutual-knn", build_args.options.mutual_knn,
                  "keep only mutual neighbor pairs");
  build->add_option("--passage-len", build_args.options.passage_budget,
                    "max tokens per passage");
  build->add_flag("--with-structure", build_args.options.with_structure,
                  "add page and table nodes");
  build->add_option("--embed", build_args.embed, "hash|remote")
      ->check(CLI::IsMember({"hash", "remote"}));
  build->add_option("--dim", build_args.options.dimension,
                    "hash embedding dimension");
  build->add_option("--gazetteer", build_args.gazetteer_file,
                    "entity list, one per line");
  build->add_option("--stopwords", build_args.stopwords_file,
                    "stopword list, one per line");
  build->add_option("--out", build_args.out, "output graph file")->required();

  RetrieveArgs retrieve_args;
  auto* ret = app.add_subcommand("retrieve", "answer-context retrieval");
  ret->add_option("--graph", retrieve_args.graph_path, "graph file")->required();
  ret->add_option("--question", retrieve_args.question, "question text")
      ->required();
  ret->add_option("--agent", retrieve_args.agent, "tfidf|oracle|remote")
      ->check(CLI::IsMember({"tfidf", "oracle", "remote"}));
  ret->add_option("--budget", retrieve_args.config.budget_K,
                  "total passage budget");
  ret->add_option("--branching", retrieve_args.config.branching,
                  "extensions per step");
  ret->add_option("--seeds", retrieve_args.config.seed_count, "seed passages");
  ret->add_option("--hops", retrieve_args.config.max_hops, "max hops per path");
  ret->add_option("--match-mode", retrieve_args.match_mode, "text|encoder")
      ->check(CLI::IsMember({"text", "encoder"}));
  ret->add_option("--text-score", retrieve_args.text_score, "tfidf|edit")
      ->check(CLI::IsMember({"tfidf", "edit"}));
  ret->add_option("--dim", retrieve_args.dimension,
                  "hash embedding dimension for encoder mode");
  ret->add_option("--embed", retrieve_args.embed,
                  "hash|remote encoder for encoder mode")
      ->check(CLI::IsMember({"hash", "remote"}));
  ret->add_option("--template", retrieve_args.template_text,
                  "prompt template with {question} and {context}");
  ret->add_flag("--no-context", retrieve_args.no_context,
                "prompt without retrieved context");
  ret->add_option("--gold", retrieve_args.gold,
                  "gold passage texts for the oracle agent");
  ret->add_option("--mode", retrieve_args.mode, "auto|content|structural")
      ->check(CLI::IsMember({"auto", "content", "structural"}));
  ret->add_flag("--json", retrieve_args.as_json, "emit the full result as JSON");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "density sweep over a QA set");
  bench->add_option("--corpus", bench_args.corpus_path, "corpus file")
      ->required();
  bench->add_option("--qa", bench_args.qa_path, "QA JSONL file")->required();
  bench->add_option("--method", bench_args.method, "knn|tfidf")
      ->check(CLI::IsMember({"knn", "tfidf"}));
  bench->add_option("--grid", bench_args.grid, "parameter values")->required();
  bench->add_option("--out", bench_args.out, "CSV output path");
  bench->add_flag("--parallel", bench_args.options.parallel,
                  "evaluate grid points in parallel (flags latencies)");
  bench->add_option("--dim", bench_args.options.dimension,
                    "hash embedding dimension");
  bench->add_option("--seeds", bench_args.options.seed_count, "seed passages");
  bench->add_option("--branching", bench_args.options.branching,
                    "ranking branch factor");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a synthetic corpus and QA set");
  gen->add_option("--docs", gen_args.spec.num_docs, "number of documents");
  gen->add_option("--chain-len", gen_args.spec.chain_length, "hops per chain");
  gen->add_option("--distractors", gen_args.spec.distractor_count,
                  "distractor passages");
  gen->add_option("--questions", gen_args.spec.num_questions, "questions");
  gen->add_option("--seed", gen_args.spec.seed, "random seed");
  gen->add_option("--pattern", gen_args.pattern, "bridge|compare")
      ->check(CLI::IsMember({"bridge", "compare"}));
  gen->add_flag("--structured", gen_args.structured,
                "pages-and-tables corpus with structural questions");
  gen->add_option("--out", gen_args.out, "corpus output path")->required();
  gen->add_option("--qa", gen_args.qa_out, "QA JSONL output path");

  std::string stats_graph;
  bool stats_json_flag = false;
  auto* stats = app.add_subcommand("stats", "print graph statistics");
  stats->add_option("--graph", stats_graph, "graph file")->required();
  stats->add_flag("--json", stats_json_flag, "emit JSON");

  ServiceConfig serve_cfg = service_config_from_env();
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--port", serve_cfg.port, "port (0 picks a free one)");
  serve->add_option("--data-dir", serve_cfg.data_dir, "persistence directory");
  serve->add_option("--workers", serve_cfg.build_workers, "build workers");
  serve->add_option("--host", serve_cfg.host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  // The default seed count yields to an explicit, smaller budget.
  if (!ret->count("--seeds"))
    retrieve_args.config.seed_count =
        std::min(retrieve_args.config.seed_count, retrieve_args.config.budget_K);

  // --docs and --seed apply to whichever generator runs.
  if (gen_args.structured) {
    if (gen->count("--docs")) gen_args.structured_spec.num_docs = gen_args.spec.num_docs;
    if (gen->count("--seed")) gen_args.structured_spec.seed = gen_args.spec.seed;
  }

  try {
    if (build->parsed()) return run_build(build_args);
    if (ret->parsed()) return run_retrieve(retrieve_args);
    if (bench->parsed()) return run_bench(bench_args);
    if (gen->parsed()) return run_gen(gen_args);
    if (stats->parsed()) return run_stats(stats_graph, stats_json_flag);
    if (serve->parsed()) return run_serve(serve_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace kgp
