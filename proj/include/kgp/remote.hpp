// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "kgp/embed.hpp"

namespace kgp {

struct RemoteConfig {
  std::string base_url;  // e.g. http://host:8001
  std::string api_key;   // sent as a bearer token when non-empty
  int max_retries = 3;
  int timeout_sec = 30;
  int backoff_ms = 200;

  // Reads KGP_EMBED_URL / KGP_EMBED_KEY. Empty base_url when unset.
  static RemoteConfig embed_from_env();
  // Reads KGP_LLM_URL / KGP_LLM_KEY.
  static RemoteConfig llm_from_env();
};

// POST {base}/embed with {"texts": [...]}, expects {"vectors": [[...]]}.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(RemoteConfig config, int dimension,
                          int batch_size = 64);
  std::string name() const override { return "remote"; }
  int dimension() const override { return dim_; }

 protected:
  std::vector<Vector> do_embed(const std::vector<std::string>& texts) override;

 private:
  RemoteConfig config_;
  int dim_;
  int batch_size_;
};

// POST {base}/generate with {"prompt", "max_tokens"}, expects {"text"}.
class CompletionClient {
 public:
  explicit CompletionClient(RemoteConfig config);
  std::string generate(const std::string& prompt, int max_tokens = 256) const;
  const RemoteConfig& config() const { return config_; }

 private:
  RemoteConfig config_;
};

}  // namespace kgp
