// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "kgp/embed.hpp"
#include "kgp/errors.hpp"
#include "kgp/remote.hpp"
#include "kgp/text.hpp"

using namespace kgp;
using nlohmann::json;

namespace {

// Stub HTTP endpoint driven by a handler lambda.
class StubServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  StubServer(const std::string& path, Handler handler) {
    server_.Post(path, [handler = std::move(handler), this](
                           const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_.load(); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

RemoteConfig fast_config(const std::string& url) {
  RemoteConfig cfg;
  cfg.base_url = url;
  cfg.max_retries = 3;
  cfg.backoff_ms = 1;
  cfg.timeout_sec = 5;
  return cfg;
}

}  // namespace

TEST_CASE("dot, l2norm, and cosine") {
  CHECK(dot({1, 2, 3}, {4, 5, 6}) == 32.0);
  CHECK_THROWS_AS(dot({1, 2}, {1, 2, 3}), DimensionError);
  CHECK(l2norm({3, 4}) == 5.0);
  CHECK(cosine({1, 0}, {0, 1}) == 0.0);
  CHECK(cosine({2, 0}, {7, 0}) == doctest::Approx(1.0));
  CHECK(cosine({1, 1}, {0, 0}) == 0.0);  // zero norm never divides
}

TEST_CASE("hash_embed follows its definition") {
  // One token: a single signed unit lands in bucket h % dim.
  Vector v = hash_embed("Quartz", 16);
  std::uint64_t h = fnv1a64("quartz");
  std::size_t bucket = h % 16;
  double sign = (h >> 63) ? -1.0 : 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i] == (i == bucket ? sign : 0.0));
  }
  // Case-insensitive and repetition-invariant after normalization.
  CHECK(hash_embed("quartz QUARTZ", 16) == hash_embed("quartz", 16));
  // Token order does not matter.
  CHECK(hash_embed("alpha beta", 32) == hash_embed("beta alpha", 32));
  // Non-empty embeddings are unit length.
  CHECK(l2norm(hash_embed("several distinct words here", 64)) ==
        doctest::Approx(1.0));
  // Empty text embeds to the zero vector.
  CHECK(l2norm(hash_embed("", 16)) == 0.0);
  CHECK_THROWS_AS(hash_embed("x", 4), InputError);
}

TEST_CASE("hashing provider embeds in input order and validates") {
  HashingProvider provider(32);
  CHECK(provider.name() == "hashing");
  CHECK(provider.dimension() == 32);
  auto out = provider.embed({"one", "two", "three"});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == hash_embed("one", 32));
  CHECK(out[2] == hash_embed("three", 32));
  CHECK_THROWS_AS(provider.embed({"ok", ""}), InputError);
  CHECK_THROWS_AS(HashingProvider(2), InputError);
}

TEST_CASE("knn ranks by cosine with id tie-breaks") {
  EmbeddingMap m;
  m["q"] = {1.0, 0.0};
  m["near"] = {0.9, 0.1};
  m["far"] = {0.0, 1.0};
  m["tie_b"] = {1.0, 0.0};
  m["tie_a"] = {2.0, 0.0};  // same direction, same cosine
  KnnList top = knn("q", m, 2);
  REQUIRE(top.entries.size() == 2);
  CHECK(top.entries[0].first == "tie_a");
  CHECK(top.entries[1].first == "tie_b");
  CHECK_FALSE(top.truncated);

  KnnList all = knn("q", m, 10);
  CHECK(all.truncated);
  CHECK(all.entries.size() == 4);
  CHECK(all.entries.back().first == "far");

  CHECK(knn("q", m, 0).entries.empty());
  CHECK_THROWS_AS(knn("q", m, -1), InputError);
  CHECK_THROWS_AS(knn("ghost", m, 2), MissingEmbeddingError);
}

TEST_CASE("remote provider embeds through the endpoint") {
  StubServer stub("/embed", [](const httplib::Request& req,
                               httplib::Response& res) {
    json body = json::parse(req.body);
    json vectors = json::array();
    for (const auto& t : body["texts"]) {
      double x = static_cast<double>(t.get<std::string>().size());
      vectors.push_back(json::array({x, 0.0, 1.0}));
    }
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 3);
  auto out = provider.embed({"ab", "cdef"});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == Vector{2.0, 0.0, 1.0});
  CHECK(out[1] == Vector{4.0, 0.0, 1.0});
}

TEST_CASE("remote provider batches requests") {
  StubServer stub("/embed", [](const httplib::Request& req,
                               httplib::Response& res) {
    json body = json::parse(req.body);
    REQUIRE(body["texts"].size() <= 2);
    json vectors = json::array();
    for (std::size_t i = 0; i < body["texts"].size(); ++i)
      vectors.push_back(json::array({1.0, 2.0}));
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 2, 2);
  auto out = provider.embed({"a", "b", "c", "d", "e"});
  CHECK(out.size() == 5);
  CHECK(stub.hits() == 3);  // ceil(5 / 2)
}

TEST_CASE("remote provider sends the bearer token") {
  std::string seen_auth;
  StubServer stub("/embed", [&](const httplib::Request& req,
                                httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.set_content(json{{"vectors", json::array({json::array({1.0})})}}.dump(),
                    "application/json");
  });
  RemoteConfig cfg = fast_config(stub.url());
  cfg.api_key = "sekrit";
  RemoteEmbeddingProvider provider(cfg, 1);
  provider.embed({"x"});
  CHECK(seen_auth == "Bearer sekrit");
}

TEST_CASE("5xx responses are retried until they succeed") {
  std::atomic<int> calls{0};
  StubServer stub("/embed", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(json{{"vectors", json::array({json::array({7.0})})}}.dump(),
                    "application/json");
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 1);
  auto out = provider.embed({"x"});
  CHECK(out[0] == Vector{7.0});
  CHECK(stub.hits() == 3);
}

TEST_CASE("persistent failures raise ProviderError naming the attempts") {
  StubServer stub("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 1);
  try {
    provider.embed({"x"});
    FAIL("expected ProviderError");
  } catch (const ProviderError& e) {
    std::string msg = e.what();
    CHECK(msg.find("3 attempt") != std::string::npos);
    CHECK(msg.find("500") != std::string::npos);
  }
  CHECK(stub.hits() == 3);
}

TEST_CASE("client errors fail immediately without retries") {
  StubServer stub("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 1);
  CHECK_THROWS_AS(provider.embed({"x"}), ProviderError);
  CHECK(stub.hits() == 1);
}

TEST_CASE("malformed payloads are provider errors") {
  StubServer stub("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"wrong_key", 1}}.dump(), "application/json");
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 1);
  CHECK_THROWS_AS(provider.embed({"x"}), ProviderError);
}

TEST_CASE("wrong dimension from the endpoint is a dimension error") {
  StubServer stub("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        json{{"vectors", json::array({json::array({1.0, 2.0})})}}.dump(),
        "application/json");
  });
  RemoteEmbeddingProvider provider(fast_config(stub.url()), 5);
  CHECK_THROWS_AS(provider.embed({"x"}), DimensionError);
}

TEST_CASE("completion client generates text") {
  std::string seen_prompt;
  StubServer stub("/generate", [&](const httplib::Request& req,
                                   httplib::Response& res) {
    json body = json::parse(req.body);
    seen_prompt = body["prompt"].get<std::string>();
    CHECK(body["max_tokens"].get<int>() == 42);
    res.set_content(json{{"text", "generated answer"}}.dump(),
                    "application/json");
  });
  CompletionClient client(fast_config(stub.url()));
  CHECK(client.generate("say something", 42) == "generated answer");
  CHECK(seen_prompt == "say something");
}

TEST_CASE("remote construction requires a base url") {
  RemoteConfig empty;
  CHECK_THROWS_AS(RemoteEmbeddingProvider(empty, 8), InputError);
  CHECK_THROWS_AS(CompletionClient{empty}, InputError);
}

TEST_CASE("env config readers pick up the variables") {
  setenv("KGP_EMBED_URL", "http://embed.example", 1);
  setenv("KGP_EMBED_KEY", "k1", 1);
  setenv("KGP_LLM_URL", "http://llm.example", 1);
  RemoteConfig e = RemoteConfig::embed_from_env();
  CHECK(e.base_url == "http://embed.example");
  CHECK(e.api_key == "k1");
  RemoteConfig l = RemoteConfig::llm_from_env();
  CHECK(l.base_url == "http://llm.example");
  CHECK(l.api_key.empty());
  unsetenv("KGP_EMBED_URL");
  unsetenv("KGP_EMBED_KEY");
  unsetenv("KGP_LLM_URL");
}
