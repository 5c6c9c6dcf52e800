// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "kgp/embed.hpp"

namespace kgp::kernels {

struct WeightedPair {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;
  double w = 0.0;

  bool operator==(const WeightedPair&) const = default;
};

// Pairwise set-overlap edges: (u, v, |S_u intersect S_v|) for every pair
// with a nonempty intersection. Sets are sorted vectors of token ids.
// Parallel over rows; output sorted by (u, v).
std::vector<WeightedPair> overlap_edges(
    const std::vector<std::vector<int>>& sets);

// K-nearest-neighbor edges under cosine similarity, weight = cosine.
// Each row picks its top k (ties broken by ascending id_rank); picks are
// then union- or mutual-symmetrized. Parallel over rows; output sorted
// by (u, v).
std::vector<WeightedPair> knn_edges(const std::vector<Vector>& embeddings,
                                    int k, bool mutual,
                                    const std::vector<int>& id_rank);

}  // namespace kgp::kernels

namespace kgp::reference {

// Serial naive counterparts of the kernels above. Kept as the oracle for
// equivalence tests and as the baseline in the kernel benchmark.
std::vector<kernels::WeightedPair> overlap_edges(
    const std::vector<std::vector<int>>& sets);

std::vector<kernels::WeightedPair> knn_edges(
    const std::vector<Vector>& embeddings, int k, bool mutual,
    const std::vector<int>& id_rank);

}  // namespace kgp::reference
