// SPDX-License-Identifier: Apache-2.0
#include "kgp/sweep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kgp/agents.hpp"
#include "kgp/build.hpp"
#include "kgp/errors.hpp"
#include "kgp/keywords.hpp"
#include "kgp/metrics.hpp"
#include "kgp/traverse.hpp"

namespace kgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

KnowledgeGraph build_for(const Corpus& corpus, const std::string& method,
                         int value, const SweepOptions& options) {
  if (method == "knn") {
    HashingProvider provider(options.dimension);
    std::vector<std::string> texts;
    for (const auto& p : corpus.passages) texts.push_back(p.text);
    std::vector<Vector> vecs = provider.embed(texts);
    EmbeddingMap map;
    for (std::size_t i = 0; i < corpus.passages.size(); ++i)
      map[corpus.passages[i].passage_id] = std::move(vecs[i]);
    return build_knn_graph(corpus, map, value);
  }
  if (method == "tfidf") {
    KeywordIndex index = extract_keywords(corpus, value, options.stopwords);
    return build_tfidf_graph(corpus, index);
  }
  throw InputError("unknown sweep method: " + method);
}

SweepRow evaluate_point(const Corpus& corpus,
                        const std::vector<QAInstance>& questions,
                        const std::string& method, int value,
                        const SweepOptions& options) {
  SweepRow row;
  row.method = method;
  row.param = method == "knn" ? "k" : "m";
  row.value = value;
  row.timing_flagged = options.parallel;

  KnowledgeGraph g;
  try {
    g = build_for(corpus, method, value, options);
  } catch (const Error& e) {
    row.error = e.what();
    row.avg_degree = kNaN;
    row.sf_em = kNaN;
    row.precision = kNaN;
    row.sf_coverage = kNaN;
    row.match_latency_ms = kNaN;
    return row;
  }

  row.avg_degree = graph_stats(g).avg_degree;

  TfIdfAgent agent(g);
  std::vector<double> ems, precisions, coverages;
  double total_rank_ns = 0.0;
  std::size_t rank_calls = 0;

  for (const auto& qa : questions) {
    if (qa.sf_ids.empty())
      throw InputError("sweep question has no supporting-fact ids: " +
                       qa.question);
    SeedResult seeds = seed_search(g, qa.question, options.seed_count,
                                   options.stopwords);
    std::set<std::string> retrieved(seeds.ids.begin(), seeds.ids.end());
    Question q;
    q.text = qa.question;
    for (const auto& seed : seeds.ids) {
      std::vector<std::string> cands = g.similarity_neighbors(seed);
      if (cands.empty()) continue;
      ReasoningPath path{{seed}, {}};
      auto t0 = std::chrono::steady_clock::now();
      RankedCandidates ranked =
          rank_neighbors(g, q, path, cands, agent, options.branching);
      auto t1 = std::chrono::steady_clock::now();
      total_rank_ns +=
          std::chrono::duration<double, std::nano>(t1 - t0).count();
      ++rank_calls;
      for (const auto& [id, _] : ranked.ranked) retrieved.insert(id);
      // Quality counts the full one-hop neighborhood around each seed.
      for (const auto& id : cands) retrieved.insert(id);
    }
    std::set<std::string> gold(qa.sf_ids.begin(), qa.sf_ids.end());
    ems.push_back(sf_em(retrieved, gold));
    precisions.push_back(retrieval_precision(retrieved, gold));
    coverages.push_back(sf_coverage(retrieved, gold));
  }

  row.sf_em = mean(ems);
  row.precision = mean(precisions);
  row.sf_coverage = mean(coverages);
  row.match_latency_ms =
      rank_calls == 0 ? 0.0 : total_rank_ns / (1e6 * rank_calls);
  return row;
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

}  // namespace

std::vector<SweepRow> density_sweep(const Corpus& corpus,
                                    const std::vector<QAInstance>& questions,
                                    const std::string& method,
                                    const std::vector<int>& grid,
                                    const SweepOptions& options) {
  if (grid.empty()) throw InputError("sweep grid is empty");
  if (questions.empty()) throw InputError("sweep needs questions");
  if (method != "knn" && method != "tfidf")
    throw InputError("unknown sweep method: " + method);

  std::vector<SweepRow> rows(grid.size());
  if (options.parallel) {
    const int n = static_cast<int>(grid.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        rows[static_cast<std::size_t>(i)] =
            evaluate_point(corpus, questions, method,
                           grid[static_cast<std::size_t>(i)], options);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows[i] = evaluate_point(corpus, questions, method, grid[i], options);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,param,value,avg_degree,sf_em,precision,match_latency_ms\n";
  for (const auto& r : rows) {
    out << r.method << "," << r.param << "," << format_cell(r.value) << ","
        << format_cell(r.avg_degree) << "," << format_cell(r.sf_em) << ","
        << format_cell(r.precision) << "," << format_cell(r.match_latency_ms)
        << "\n";
  }
  return out.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << sweep_csv(rows);
}

}  // namespace kgp
