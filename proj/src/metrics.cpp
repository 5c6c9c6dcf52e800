// SPDX-License-Identifier: Apache-2.0
#include "kgp/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "kgp/errors.hpp"
#include "kgp/text.hpp"

namespace kgp {

std::string normalize_answer(const std::string& s) {
  std::string stripped;
  stripped.reserve(s.size());
  for (unsigned char c : s) {
    if (std::ispunct(c)) continue;
    stripped.push_back(static_cast<char>(std::tolower(c)));
  }
  std::vector<std::string> kept;
  for (auto& tok : tokenize_ws(stripped)) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    kept.push_back(std::move(tok));
  }
  return join(kept);
}

std::vector<std::string> answer_tokens(const std::string& s) {
  return tokenize_ws(normalize_answer(s));
}

double answer_f1(const std::string& prediction, const std::string& gold) {
  std::vector<std::string> p = answer_tokens(prediction);
  std::vector<std::string> g = answer_tokens(gold);
  if (p.empty() || g.empty())
    return normalize_answer(prediction) == normalize_answer(gold) ? 1.0 : 0.0;
  std::map<std::string, int> pc, gc;
  for (const auto& t : p) ++pc[t];
  for (const auto& t : g) ++gc[t];
  int overlap = 0;
  for (const auto& [t, c] : pc) {
    auto it = gc.find(t);
    if (it != gc.end()) overlap += std::min(c, it->second);
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(p.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

int answer_em(const std::string& prediction, const std::string& gold) {
  return normalize_answer(prediction) == normalize_answer(gold) ? 1 : 0;
}

int sf_em(const std::set<std::string>& retrieved,
          const std::set<std::string>& gold) {
  if (gold.empty()) throw InputError("gold supporting-fact set is empty");
  for (const auto& id : gold) {
    if (!retrieved.count(id)) return 0;
  }
  return 1;
}

double sf_coverage(const std::set<std::string>& retrieved,
                   const std::set<std::string>& gold) {
  if (gold.empty()) throw InputError("gold supporting-fact set is empty");
  std::size_t hit = 0;
  for (const auto& id : gold) {
    if (retrieved.count(id)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

double retrieval_precision(const std::set<std::string>& retrieved,
                           const std::set<std::string>& gold) {
  if (retrieved.empty()) throw InputError("retrieved set is empty");
  std::size_t hit = 0;
  for (const auto& id : retrieved) {
    if (gold.count(id)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(retrieved.size());
}

int struct_em(const std::vector<std::string>& payloads,
              const std::string& gold) {
  std::string g = normalize_answer(gold);
  for (const auto& p : payloads) {
    if (normalize_answer(p) == g) return 1;
  }
  return 0;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw InputError("mean of an empty sequence");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

namespace {

// Average ranks, ties share the mean of their positions (1-based).
std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InputError("spearman needs two equal-length sequences of >= 2");
  std::vector<double> ra = ranks(a);
  std::vector<double> rb = ranks(b);
  double ma = mean(ra);
  double mb = mean(rb);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace kgp
