// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "kgp/corpus.hpp"
#include "kgp/service.hpp"
#include "kgp/synth.hpp"

using namespace kgp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TestService {
  explicit TestService(const std::string& dir_name, bool wipe = true) {
    dir = (fs::temp_directory_path() / dir_name).string();
    if (wipe) fs::remove_all(dir);
    ServiceConfig cfg;
    cfg.port = 0;
    cfg.data_dir = dir;
    cfg.build_workers = 2;
    service = std::make_unique<Service>(cfg);
    port = service->start();
    REQUIRE(port > 0);
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    client->set_read_timeout(20, 0);
  }

  json post(const std::string& path, const json& body, int expect) {
    auto res = client->Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  json get(const std::string& path, int expect) {
    auto res = client->Get(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  json del(const std::string& path, int expect) {
    auto res = client->Delete(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  json wait_for_job(const std::string& job_id) {
    for (int i = 0; i < 200; ++i) {
      json job = get("/jobs/" + job_id, 200);
      std::string status = job["status"].get<std::string>();
      if (status == "done" || status == "failed") return job;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    FAIL("job never finished");
    return {};
  }

  std::string dir;
  int port = 0;
  std::unique_ptr<Service> service;
  std::unique_ptr<httplib::Client> client;
};

std::string small_corpus_json() {
  SynthSpec spec;
  spec.num_docs = 6;
  spec.chain_length = 2;
  spec.distractor_count = 6;
  spec.num_questions = 2;
  spec.seed = 5;
  return corpus_to_json_string(generate_synthetic(spec).corpus);
}

std::string structured_corpus_json() {
  StructuredSynthSpec spec;
  spec.num_docs = 3;
  spec.pages_per_doc = 2;
  spec.tables_per_doc = 1;
  return corpus_to_json_string(generate_structured(spec).corpus);
}

}  // namespace

TEST_CASE("corpus upload, graph build, stats, and queries") {
  TestService svc("kgp_serve_test_main");

  json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  std::string corpus_id = up["corpus_id"].get<std::string>();
  REQUIRE_FALSE(corpus_id.empty());

  // Re-uploading the same body yields the same id.
  json up2 = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  CHECK(up2["corpus_id"] == corpus_id);

  json job_req{{"corpus_id", corpus_id},
               {"method", "tfidf"},
               {"params", {{"m", 10}}}};
  json accepted = svc.post("/graphs", job_req, 202);
  std::string job_id = accepted["job_id"].get<std::string>();

  // The same build request maps onto the same job.
  CHECK(svc.post("/graphs", job_req, 202)["job_id"] == job_id);

  json job = svc.wait_for_job(job_id);
  REQUIRE(job["status"] == "done");
  std::string graph_id = job["graph_id"].get<std::string>();

  json stats = svc.get("/graphs/" + graph_id + "/stats", 200);
  CHECK(stats["num_passage_nodes"].get<int>() > 0);
  CHECK(stats["num_edges"].get<int>() > 0);

  json query{{"question", "Which fact does the trail starting at key0x0 "
                          "finally reveal?"},
             {"budget_K", 6},
             {"seed_count", 2},
             {"branching", 2},
             {"max_hops", 1}};
  json answer = svc.post("/graphs/" + graph_id + "/query", query, 200);
  CHECK(answer["kind"] == "content");
  CHECK(answer["context_passages"].size() <= 6);
  CHECK_FALSE(answer["context_texts"].empty());
  CHECK(answer["prompt"].get<std::string>().find("Question:") !=
        std::string::npos);
  CHECK_FALSE(answer["paths"].empty());

  // Oracle agent needs gold texts.
  json oracle_query{{"question", "anything"}, {"agent", "oracle"}};
  svc.post("/graphs/" + graph_id + "/query", oracle_query, 400);
  oracle_query["gold"] = json::array({"some gold text"});
  json oracle_res =
      svc.post("/graphs/" + graph_id + "/query", oracle_query, 200);
  CHECK(oracle_res["kind"] == "content");
}

TEST_CASE("error mapping: 400s and 404s") {
  TestService svc("kgp_serve_test_errors");
  auto res = svc.client->Post("/corpora", "{broken", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  svc.post("/graphs", json{{"corpus_id", "ghost"}, {"method", "tfidf"}}, 404);
  svc.post("/graphs", json{{"method", "tfidf"}}, 400);

  json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  svc.post("/graphs",
           json{{"corpus_id", up["corpus_id"]}, {"method", "warp"}}, 400);

  svc.get("/jobs/ghost", 404);
  svc.get("/graphs/ghost/stats", 404);
  svc.post("/graphs/ghost/query", json{{"question", "q"}}, 404);
  svc.del("/graphs/ghost/documents/d", 404);
}

TEST_CASE("failed builds report their error") {
  TestService svc("kgp_serve_test_fail");
  json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  // k larger than the passage count cannot build.
  json accepted = svc.post("/graphs",
                           json{{"corpus_id", up["corpus_id"]},
                                {"method", "knn"},
                                {"params", {{"k", 10000}}}},
                           202);
  json job = svc.wait_for_job(accepted["job_id"].get<std::string>());
  CHECK(job["status"] == "failed");
  CHECK_FALSE(job["error"].get<std::string>().empty());
  // No graph appears under the failed job's id.
  svc.get("/graphs/" + accepted["job_id"].get<std::string>() + "/stats", 404);
}

TEST_CASE("structural queries against a structured graph") {
  TestService svc("kgp_serve_test_struct");
  json up = svc.post("/corpora", json::parse(structured_corpus_json()), 200);
  json accepted = svc.post("/graphs",
                           json{{"corpus_id", up["corpus_id"]},
                                {"method", "tfidf"},
                                {"params", {{"with_structure", true}}}},
                           202);
  json job = svc.wait_for_job(accepted["job_id"].get<std::string>());
  REQUIRE(job["status"] == "done");
  std::string gid = job["graph_id"].get<std::string>();

  json res = svc.post("/graphs/" + gid + "/query",
                      json{{"question", "What does table 0 show?"}}, 200);
  CHECK(res["kind"] == "structural");
  REQUIRE(res["structural_payloads"].size() == 1);
  CHECK(res["structural_payloads"][0].get<std::string>().find("| --- |") !=
        std::string::npos);

  svc.post("/graphs/" + gid + "/query",
           json{{"question", "What does table 99 show?"}}, 404);

  // Forcing content mode runs a traversal instead.
  json forced = svc.post("/graphs/" + gid + "/query",
                         json{{"question", "What does table 0 show?"},
                              {"mode", "content"}},
                         200);
  CHECK(forced["kind"] == "content");
}

TEST_CASE("document add and remove through the service") {
  TestService svc("kgp_serve_test_docs");
  json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  json accepted = svc.post("/graphs",
                           json{{"corpus_id", up["corpus_id"]},
                                {"method", "tfidf"}},
                           202);
  json job = svc.wait_for_job(accepted["job_id"].get<std::string>());
  REQUIRE(job["status"] == "done");
  std::string gid = job["graph_id"].get<std::string>();
  int nodes_before = svc.get("/graphs/" + gid + "/stats", 200)["num_nodes"];

  json doc{{"doc_id", "extra"},
           {"title", "Extra Doc"},
           {"pages", json::array({json{
                {"page_number", 1},
                {"blocks", json::array({json{{"kind", "text"},
                                             {"content", "harbor lantern "
                                                         "meadow quarry"}}})}
            }})}};
  json added = svc.post("/graphs/" + gid + "/documents", doc, 200);
  CHECK(added["stats"]["num_nodes"].get<int>() == nodes_before + 1);

  // Duplicate adds conflict.
  svc.post("/graphs/" + gid + "/documents", doc, 409);
  // Malformed documents are rejected.
  svc.post("/graphs/" + gid + "/documents", json{{"doc_id", "half"}}, 400);

  json removed = svc.del("/graphs/" + gid + "/documents/extra", 200);
  CHECK(removed["stats"]["num_nodes"].get<int>() == nodes_before);
  svc.del("/graphs/" + gid + "/documents/extra", 404);
}

TEST_CASE("state survives a restart on the same data dir") {
  std::string graph_id;
  std::string dir_name = "kgp_serve_test_restart";
  {
    TestService svc(dir_name);
    json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
    json accepted = svc.post("/graphs",
                             json{{"corpus_id", up["corpus_id"]},
                                  {"method", "tfidf"}},
                             202);
    json job = svc.wait_for_job(accepted["job_id"].get<std::string>());
    REQUIRE(job["status"] == "done");
    graph_id = job["graph_id"].get<std::string>();
    svc.service->stop();
  }
  TestService svc(dir_name, /*wipe=*/false);
  json stats = svc.get("/graphs/" + graph_id + "/stats", 200);
  CHECK(stats["num_passage_nodes"].get<int>() > 0);
  json job = svc.get("/jobs/" + graph_id, 200);
  CHECK(job["status"] == "done");
  json res = svc.post("/graphs/" + graph_id + "/query",
                      json{{"question", "key0x0 trail"}}, 200);
  CHECK_FALSE(res["context_passages"].empty());
}

TEST_CASE("queries run concurrently") {
  TestService svc("kgp_serve_test_conc");
  json up = svc.post("/corpora", json::parse(small_corpus_json()), 200);
  json accepted = svc.post("/graphs",
                           json{{"corpus_id", up["corpus_id"]},
                                {"method", "tfidf"}},
                           202);
  json job = svc.wait_for_job(accepted["job_id"].get<std::string>());
  REQUIRE(job["status"] == "done");
  std::string gid = job["graph_id"].get<std::string>();

  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", svc.port);
      c.set_read_timeout(20, 0);
      json q{{"question", "trail key" + std::to_string(i % 2) + "x0"},
             {"budget_K", 5},
             {"seed_count", 2}};
      auto res = c.Post("/graphs/" + gid + "/query", q.dump(),
                        "application/json");
      if (res && res->status == 200) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 6);
}

TEST_CASE("config file overrides defaults") {
  fs::path dir = fs::temp_directory_path() / "kgp_serve_test_cfg";
  fs::create_directories(dir);
  std::string cfg_path = (dir / "cfg.json").string();
  std::ofstream(cfg_path) << R"({"port": 7711, "data_dir": "/tmp/kgp_cfg_dir",
                                 "workers": 5})";
  setenv("KGP_CONFIG", cfg_path.c_str(), 1);
  ServiceConfig cfg = service_config_from_env();
  CHECK(cfg.port == 7711);
  CHECK(cfg.data_dir == "/tmp/kgp_cfg_dir");
  CHECK(cfg.build_workers == 5);
  CHECK(cfg.host == "127.0.0.1");
  unsetenv("KGP_CONFIG");
  ServiceConfig defaults = service_config_from_env();
  CHECK(defaults.port == 8080);
}
