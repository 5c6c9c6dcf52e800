// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "kgp/corpus.hpp"
#include "kgp/synth.hpp"
#include "kgp/text.hpp"

namespace kgp {

struct SweepRow {
  std::string method;  // knn | tfidf
  std::string param;   // k | m
  double value = 0.0;
  double avg_degree = 0.0;
  double sf_em = 0.0;
  double precision = 0.0;
  double sf_coverage = 0.0;  // secondary metric, not part of the CSV
  double match_latency_ms = 0.0;
  std::string error;         // build failure message; metrics are NaN
  bool timing_flagged = false;  // latency measured under parallel rows
};

struct SweepOptions {
  int seed_count = 10;
  int branching = 3;
  int dimension = 64;  // hash embedding dimension for knn sweeps
  // Evaluate grid points in parallel. Off by default: per-row latencies
  // are only trustworthy when rows run alone, so parallel rows are
  // flagged via timing_flagged.
  bool parallel = false;
  StopwordSet stopwords = default_stopwords();
};

// Builds one graph per grid value (knn: k, tfidf: m) and measures
// retrieval quality of seeds plus their one-hop neighborhoods, along
// with the mean latency of one neighbor-ranking step. A failed build
// yields a row with the error recorded instead of metrics.
std::vector<SweepRow> density_sweep(const Corpus& corpus,
                                    const std::vector<QAInstance>& questions,
                                    const std::string& method,
                                    const std::vector<int>& grid,
                                    const SweepOptions& options = {});

// Header: method,param,value,avg_degree,sf_em,precision,match_latency_ms
std::string sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

}  // namespace kgp
