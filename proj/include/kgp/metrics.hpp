// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

namespace kgp {

// Lowercase, strip punctuation, drop the articles a/an/the, collapse
// whitespace.
std::string normalize_answer(const std::string& s);
std::vector<std::string> answer_tokens(const std::string& s);

// Token-multiset F1 over normalized answers. When either side normalizes
// to nothing, falls back to exact equality.
double answer_f1(const std::string& prediction, const std::string& gold);
int answer_em(const std::string& prediction, const std::string& gold);

// 1 when every gold id was retrieved (all-or-nothing), else 0.
int sf_em(const std::set<std::string>& retrieved,
          const std::set<std::string>& gold);

// Fraction of gold ids retrieved.
double sf_coverage(const std::set<std::string>& retrieved,
                   const std::set<std::string>& gold);

double retrieval_precision(const std::set<std::string>& retrieved,
                           const std::set<std::string>& gold);

// 1 when any payload matches the gold content after normalization.
int struct_em(const std::vector<std::string>& payloads,
              const std::string& gold);

double mean(const std::vector<double>& xs);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace kgp
