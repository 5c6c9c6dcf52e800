// SPDX-License-Identifier: Apache-2.0
#include "kgp/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "kgp/errors.hpp"

namespace kgp {

using nlohmann::json;

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

// POSTs JSON with retries on connection failures and 5xx responses.
json post_json(const RemoteConfig& cfg, const std::string& path,
               const json& body) {
  std::string last_error = "no attempt made";
  int attempts = std::max(1, cfg.max_retries);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(cfg.timeout_sec, 0);
    client.set_read_timeout(cfg.timeout_sec, 0);
    httplib::Headers headers;
    if (!cfg.api_key.empty())
      headers.emplace("Authorization", "Bearer " + cfg.api_key);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "connection failed (" + httplib::to_string(res.error()) + ")";
    } else if (res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw ProviderError(cfg.base_url + path + ": status " +
                          std::to_string(res->status) + " after " +
                          std::to_string(attempt) + " attempt(s)");
    } else {
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        last_error = std::string("invalid JSON response: ") + e.what();
      }
    }
    if (attempt < attempts) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg.backoff_ms * attempt));
    }
  }
  throw ProviderError(cfg.base_url + path + ": " + last_error + " after " +
                      std::to_string(attempts) + " attempt(s)");
}

}  // namespace

RemoteConfig RemoteConfig::embed_from_env() {
  RemoteConfig c;
  c.base_url = env_or_empty("KGP_EMBED_URL");
  c.api_key = env_or_empty("KGP_EMBED_KEY");
  return c;
}

RemoteConfig RemoteConfig::llm_from_env() {
  RemoteConfig c;
  c.base_url = env_or_empty("KGP_LLM_URL");
  c.api_key = env_or_empty("KGP_LLM_KEY");
  return c;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteConfig config,
                                                 int dimension, int batch_size)
    : config_(std::move(config)), dim_(dimension), batch_size_(batch_size) {
  if (config_.base_url.empty())
    throw InputError("remote embedding provider needs a base URL "
                     "(set KGP_EMBED_URL or pass one explicitly)");
  if (dim_ < 1) throw InputError("embedding dimension must be >= 1");
  if (batch_size_ < 1) throw InputError("batch size must be >= 1");
}

std::vector<Vector> RemoteEmbeddingProvider::do_embed(
    const std::vector<std::string>& texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size();
       start += static_cast<std::size_t>(batch_size_)) {
    std::size_t end =
        std::min(texts.size(), start + static_cast<std::size_t>(batch_size_));
    json body;
    body["texts"] = std::vector<std::string>(texts.begin() + start,
                                             texts.begin() + end);
    json res = post_json(config_, "/embed", body);
    if (!res.contains("vectors") || !res["vectors"].is_array())
      throw ProviderError(config_.base_url +
                          "/embed: response missing \"vectors\"");
    for (const auto& jv : res["vectors"]) {
      if (!jv.is_array())
        throw ProviderError(config_.base_url +
                            "/embed: vector entry is not an array");
      out.push_back(jv.get<Vector>());
    }
  }
  return out;
}

CompletionClient::CompletionClient(RemoteConfig config)
    : config_(std::move(config)) {
  if (config_.base_url.empty())
    throw InputError("completion client needs a base URL "
                     "(set KGP_LLM_URL or pass one explicitly)");
}

std::string CompletionClient::generate(const std::string& prompt,
                                       int max_tokens) const {
  json body;
  body["prompt"] = prompt;
  body["max_tokens"] = max_tokens;
  json res = post_json(config_, "/generate", body);
  if (!res.contains("text") || !res["text"].is_string())
    throw ProviderError(config_.base_url +
                        "/generate: response missing \"text\"");
  return res["text"].get<std::string>();
}

}  // namespace kgp
