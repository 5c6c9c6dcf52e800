// SPDX-License-Identifier: Apache-2.0
#include "kgp/embed.hpp"

#include <algorithm>
#include <cmath>

#include "kgp/errors.hpp"
#include "kgp/text.hpp"

namespace kgp {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw DimensionError("vector dimensions differ: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double cosine(const Vector& a, const Vector& b) {
  double d = dot(a, b);
  double na = l2norm(a);
  double nb = l2norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return d / (na * nb);
}

Vector hash_embed(const std::string& text, int dim) {
  if (dim < 8) throw InputError("embedding dimension must be >= 8");
  Vector v(static_cast<std::size_t>(dim), 0.0);
  for (const auto& tok : tokenize_ws(text)) {
    std::uint64_t h = fnv1a64(lowercase(tok));
    std::size_t bucket = h % static_cast<std::uint64_t>(dim);
    double sign = (h >> 63) ? -1.0 : 1.0;
    v[bucket] += sign;
  }
  double n = l2norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

std::vector<Vector> EmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  for (const auto& t : texts) {
    if (t.empty()) throw InputError("cannot embed an empty text");
  }
  std::vector<Vector> out = do_embed(texts);
  if (out.size() != texts.size())
    throw ProviderError(name() + " returned " + std::to_string(out.size()) +
                        " vectors for " + std::to_string(texts.size()) +
                        " texts");
  for (const auto& v : out) {
    if (static_cast<int>(v.size()) != dimension())
      throw DimensionError(name() + " returned a vector of length " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(dimension()));
  }
  return out;
}

Vector EmbeddingProvider::embed_one(const std::string& text) {
  return embed({text})[0];
}

HashingProvider::HashingProvider(int dim) : dim_(dim) {
  if (dim < 8) throw InputError("embedding dimension must be >= 8");
}

std::vector<Vector> HashingProvider::do_embed(
    const std::vector<std::string>& texts) {
  std::vector<Vector> out(texts.size());
  const int n = static_cast<int>(texts.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        hash_embed(texts[static_cast<std::size_t>(i)], dim_);
  }
  return out;
}

KnnList knn(const std::string& query_id, const EmbeddingMap& embeddings,
            int k) {
  if (k < 0) throw InputError("k must be >= 0");
  auto it = embeddings.find(query_id);
  if (it == embeddings.end())
    throw MissingEmbeddingError("no embedding for " + query_id);
  KnnList out;
  if (k == 0) return out;
  const Vector& q = it->second;
  for (const auto& [id, v] : embeddings) {
    if (id == query_id) continue;
    out.entries.emplace_back(id, cosine(q, v));
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (static_cast<std::size_t>(k) >= out.entries.size()) {
    out.truncated = true;
  } else {
    out.entries.resize(static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace kgp
