// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgp/corpus.hpp"

namespace kgp {

struct QAInstance {
  std::string question;
  std::string answer;
  std::vector<std::string> sf_ids;  // gold supporting passage ids
  std::string structural_gold;      // expected payload, structural only
};

enum class ChainPattern { bridge, compare };

struct SynthSpec {
  int num_docs = 12;
  int chain_length = 3;
  int distractor_count = 20;
  int num_questions = 5;
  std::uint64_t seed = 7;
  ChainPattern pattern = ChainPattern::bridge;
};

struct SynthResult {
  Corpus corpus;  // already split into passages
  std::vector<QAInstance> questions;
};

// Multi-hop chains planted in a distractor haystack. Consecutive chain
// passages share a rare key token, the question names the head key, the
// answer token sits in the last chain passage, and each chain passage
// lives in a different document. Deterministic in the seed.
SynthResult generate_synthetic(const SynthSpec& spec);

struct StructuredSynthSpec {
  int num_docs = 20;
  int pages_per_doc = 3;
  int tables_per_doc = 2;
  std::uint64_t seed = 11;
};

// Documents with globally unique page numbers and table ids, one passage
// per page, plus "page N"/"table N" questions with their exact payloads.
SynthResult generate_structured(const StructuredSynthSpec& spec);

void save_qa_jsonl(const std::vector<QAInstance>& questions,
                   const std::string& path);
std::vector<QAInstance> load_qa_jsonl(const std::string& path);

}  // namespace kgp
