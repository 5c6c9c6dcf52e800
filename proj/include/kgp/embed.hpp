// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace kgp {

using Vector = std::vector<double>;

// node/passage id -> embedding; ordered so iteration is deterministic.
using EmbeddingMap = std::map<std::string, Vector>;

double dot(const Vector& a, const Vector& b);
double l2norm(const Vector& v);

// Cosine similarity; 0 when either vector has zero norm.
double cosine(const Vector& a, const Vector& b);

// Signed feature hashing over the lowercased token bag, L2 normalized.
// Deterministic across runs (FNV-1a). Empty text -> zero vector.
Vector hash_embed(const std::string& text, int dim);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual int dimension() const = 0;

  // Validates inputs then delegates to do_embed. Output order matches
  // input order; every vector has length dimension().
  std::vector<Vector> embed(const std::vector<std::string>& texts);

  Vector embed_one(const std::string& text);

 protected:
  virtual std::vector<Vector> do_embed(
      const std::vector<std::string>& texts) = 0;
};

class HashingProvider : public EmbeddingProvider {
 public:
  explicit HashingProvider(int dim);
  std::string name() const override { return "hashing"; }
  int dimension() const override { return dim_; }

 protected:
  std::vector<Vector> do_embed(const std::vector<std::string>& texts) override;

 private:
  int dim_;
};

struct KnnList {
  std::vector<std::pair<std::string, double>> entries;  // (id, cosine)
  bool truncated = false;  // k asked for more neighbors than exist
};

// Nearest neighbors of query_id among the other map entries, ranked by
// cosine descending, ties by ascending id.
KnnList knn(const std::string& query_id, const EmbeddingMap& embeddings,
            int k);

}  // namespace kgp
