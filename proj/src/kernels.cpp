// SPDX-License-Identifier: Apache-2.0
#include "kgp/kernels.hpp"

#include <algorithm>

#include "kgp/errors.hpp"

namespace kgp::kernels {

namespace {

void check_knn_inputs(const std::vector<Vector>& embeddings, int k,
                      const std::vector<int>& id_rank) {
  const std::size_t n = embeddings.size();
  if (k < 1) throw InputError("knn k must be >= 1");
  if (static_cast<std::size_t>(k) >= n)
    throw InputError("knn k must be smaller than the number of nodes");
  if (id_rank.size() != n)
    throw InconsistentInputError("id_rank size does not match embeddings");
  for (std::size_t i = 1; i < n; ++i) {
    if (embeddings[i].size() != embeddings[0].size())
      throw DimensionError("embeddings have mixed dimensions");
  }
}

}  // namespace

std::vector<WeightedPair> overlap_edges(
    const std::vector<std::vector<int>>& sets) {
  const int n = static_cast<int>(sets.size());
  if (n == 0) return {};

  int max_token = -1;
  for (const auto& s : sets) {
    for (int t : s) max_token = std::max(max_token, t);
  }
  // Inverted index: token -> rows containing it, ascending.
  std::vector<std::vector<std::uint32_t>> postings(
      static_cast<std::size_t>(max_token + 1));
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i) {
    for (int t : sets[i]) postings[static_cast<std::size_t>(t)].push_back(i);
  }

  std::vector<std::vector<WeightedPair>> buckets(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (int ui = 0; ui < n; ++ui) {
      auto u = static_cast<std::uint32_t>(ui);
      touched.clear();
      for (int t : sets[u]) {
        for (std::uint32_t v : postings[static_cast<std::size_t>(t)]) {
          if (v <= u) continue;
          if (counts[v] == 0) touched.push_back(v);
          ++counts[v];
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& bucket = buckets[u];
      for (std::uint32_t v : touched) {
        bucket.push_back(WeightedPair{u, v, static_cast<double>(counts[v])});
        counts[v] = 0;
      }
    }
  }

  std::vector<WeightedPair> out;
  for (auto& b : buckets) {
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<WeightedPair> knn_edges(const std::vector<Vector>& embeddings,
                                    int k, bool mutual,
                                    const std::vector<int>& id_rank) {
  check_knn_inputs(embeddings, k, id_rank);
  const int n = static_cast<int>(embeddings.size());

  // Directed picks: chosen[u] = indices of u's top-k, sorted for lookup.
  std::vector<std::vector<std::uint32_t>> chosen(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<std::pair<double, std::uint32_t>> cand;
#pragma omp for schedule(dynamic, 8)
    for (int ui = 0; ui < n; ++ui) {
      auto u = static_cast<std::uint32_t>(ui);
      cand.clear();
      for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v) {
        if (v == u) continue;
        cand.emplace_back(cosine(embeddings[u], embeddings[v]), v);
      }
      std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return id_rank[a.second] < id_rank[b.second];
      });
      cand.resize(static_cast<std::size_t>(k));
      auto& picks = chosen[u];
      for (const auto& [_, v] : cand) picks.push_back(v);
      std::sort(picks.begin(), picks.end());
    }
  }

  std::vector<WeightedPair> out;
  for (std::uint32_t u = 0; u < static_cast<std::uint32_t>(n); ++u) {
    for (std::uint32_t v : chosen[u]) {
      bool reverse = std::binary_search(chosen[v].begin(), chosen[v].end(), u);
      bool keep;
      if (mutual) {
        keep = reverse && u < v;  // emit once, from the lower endpoint
      } else {
        keep = u < v || !reverse;  // reverse-picked pairs emit from lower end
      }
      if (!keep) continue;
      std::uint32_t a = std::min(u, v);
      std::uint32_t b = std::max(u, v);
      out.push_back(WeightedPair{a, b, cosine(embeddings[a], embeddings[b])});
    }
  }
  std::sort(out.begin(), out.end(), [](const WeightedPair& a, const WeightedPair& b) {
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return out;
}

}  // namespace kgp::kernels
