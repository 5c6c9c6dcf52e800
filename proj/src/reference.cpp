// SPDX-License-Identifier: Apache-2.0
// Serial naive implementations used as oracles for the parallel kernels.
#include <algorithm>

#include "kgp/errors.hpp"
#include "kgp/kernels.hpp"

namespace kgp::reference {

using kernels::WeightedPair;

std::vector<WeightedPair> overlap_edges(
    const std::vector<std::vector<int>>& sets) {
  const std::size_t n = sets.size();
  std::vector<WeightedPair> out;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      std::vector<int> common;
      std::set_intersection(sets[u].begin(), sets[u].end(), sets[v].begin(),
                            sets[v].end(), std::back_inserter(common));
      if (!common.empty()) {
        out.push_back(WeightedPair{static_cast<std::uint32_t>(u),
                                   static_cast<std::uint32_t>(v),
                                   static_cast<double>(common.size())});
      }
    }
  }
  return out;
}

std::vector<WeightedPair> knn_edges(const std::vector<Vector>& embeddings,
                                    int k, bool mutual,
                                    const std::vector<int>& id_rank) {
  const std::size_t n = embeddings.size();
  if (k < 1) throw InputError("knn k must be >= 1");
  if (static_cast<std::size_t>(k) >= n)
    throw InputError("knn k must be smaller than the number of nodes");
  if (id_rank.size() != n)
    throw InconsistentInputError("id_rank size does not match embeddings");

  std::vector<std::vector<bool>> picked(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v) {
      if (v != u) order.push_back(v);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double ca = cosine(embeddings[u], embeddings[a]);
      double cb = cosine(embeddings[u], embeddings[b]);
      if (ca != cb) return ca > cb;
      return id_rank[a] < id_rank[b];
    });
    for (int i = 0; i < k; ++i) picked[u][order[static_cast<std::size_t>(i)]] = true;
  }

  std::vector<WeightedPair> out;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      bool edge = mutual ? (picked[u][v] && picked[v][u])
                         : (picked[u][v] || picked[v][u]);
      if (edge) {
        out.push_back(WeightedPair{static_cast<std::uint32_t>(u),
                                   static_cast<std::uint32_t>(v),
                                   cosine(embeddings[u], embeddings[v])});
      }
    }
  }
  return out;
}

}  // namespace kgp::reference
