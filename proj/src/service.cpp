// SPDX-License-Identifier: Apache-2.0
#include "kgp/service.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "kgp/agents.hpp"
#include "kgp/build.hpp"
#include "kgp/corpus.hpp"
#include "kgp/errors.hpp"
#include "kgp/graph_io.hpp"
#include "kgp/text.hpp"
#include "kgp/traverse.hpp"

namespace kgp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex_id(char prefix, std::uint64_t h) {
  std::ostringstream ss;
  ss << prefix << std::hex << h;
  return ss.str();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  reply(res, status, json{{"error", msg}});
}

json stats_json(const KnowledgeGraph& g) {
  GraphStats s = graph_stats(g);
  return json{{"num_nodes", s.num_nodes},
              {"num_passage_nodes", s.num_passage_nodes},
              {"num_edges", s.num_edges},
              {"containment_edges", s.containment_edges},
              {"density", s.density},
              {"avg_degree", s.avg_degree}};
}

BuildOptions options_from_params(const std::string& method, const json& params) {
  BuildOptions opts;
  opts.method = method;
  opts.passage_budget = params.value("passage_budget", 250);
  opts.keywords_m = params.value("m", 20);
  opts.knn_k = params.value("k", 5);
  opts.mutual_knn = params.value("mutual", false);
  opts.provider = params.value("provider", std::string("hashing"));
  opts.dimension = params.value("dimension", 64);
  opts.with_structure = params.value("with_structure", false);
  if (params.contains("gazetteer"))
    opts.gazetteer = params["gazetteer"].get<std::vector<std::string>>();
  return opts;
}

}  // namespace

ServiceConfig service_config_from_env() {
  ServiceConfig cfg;
  const char* path = std::getenv("KGP_CONFIG");
  if (!path) return cfg;
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError(std::string("cannot open KGP_CONFIG file ") + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string(path) + ": invalid JSON: " + e.what());
  }
  cfg.host = j.value("host", cfg.host);
  cfg.port = j.value("port", cfg.port);
  cfg.data_dir = j.value("data_dir", cfg.data_dir);
  cfg.build_workers = j.value("workers", cfg.build_workers);
  return cfg;
}

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;
  std::thread server_thread;
  int bound_port = 0;

  std::mutex jobs_mu;
  std::map<std::string, json> jobs;
  std::deque<std::string> queue;
  std::condition_variable job_cv;
  bool shutting_down = false;
  std::vector<std::thread> workers;

  std::mutex graphs_mu;
  std::map<std::string, std::shared_ptr<const KnowledgeGraph>> cache;
  std::map<std::string, std::shared_ptr<std::mutex>> locks;

  explicit Impl(ServiceConfig cfg) : config(std::move(cfg)) {}

  fs::path corpora_dir() const { return fs::path(config.data_dir) / "corpora"; }
  fs::path graphs_dir() const { return fs::path(config.data_dir) / "graphs"; }
  fs::path jobs_dir() const { return fs::path(config.data_dir) / "jobs"; }

  fs::path corpus_path(const std::string& id) const {
    return corpora_dir() / (id + ".json");
  }
  fs::path graph_path(const std::string& id) const {
    return graphs_dir() / (id + ".json");
  }
  fs::path job_path(const std::string& id) const {
    return jobs_dir() / (id + ".json");
  }

  void persist_job(const json& record) {
    std::ofstream f(job_path(record.at("job_id").get<std::string>()),
                    std::ios::binary);
    f << record.dump(2) << "\n";
  }

  void load_jobs() {
    if (!fs::exists(jobs_dir())) return;
    for (const auto& e : fs::directory_iterator(jobs_dir())) {
      if (!e.is_regular_file() || e.path().extension() != ".json") continue;
      std::ifstream f(e.path(), std::ios::binary);
      json record;
      try {
        f >> record;
      } catch (const json::exception&) {
        continue;
      }
      std::string id = record.value("job_id", std::string());
      if (id.empty()) continue;
      std::string status = record.value("status", std::string());
      if (status == "running" || status == "queued") {
        // Interrupted by a previous shutdown; run it again.
        record["status"] = "queued";
        queue.push_back(id);
      }
      jobs[id] = std::move(record);
    }
  }

  std::shared_ptr<const KnowledgeGraph> get_graph(const std::string& id) {
    std::lock_guard<std::mutex> lk(graphs_mu);
    auto it = cache.find(id);
    if (it != cache.end()) return it->second;
    fs::path p = graph_path(id);
    if (!fs::exists(p)) return nullptr;
    auto g = std::make_shared<KnowledgeGraph>(load_graph(p.string()));
    cache[id] = g;
    return g;
  }

  void put_graph(const std::string& id, KnowledgeGraph g) {
    auto sp = std::make_shared<const KnowledgeGraph>(std::move(g));
    std::lock_guard<std::mutex> lk(graphs_mu);
    cache[id] = std::move(sp);
  }

  std::shared_ptr<std::mutex> graph_lock(const std::string& id) {
    std::lock_guard<std::mutex> lk(graphs_mu);
    auto& slot = locks[id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
  }

  void run_job(const std::string& id) {
    json record;
    {
      std::lock_guard<std::mutex> lk(jobs_mu);
      record = jobs.at(id);
      record["status"] = "running";
      jobs[id] = record;
      persist_job(record);
    }
    json done = record;
    try {
      std::string corpus_id = record.at("corpus_id").get<std::string>();
      Corpus corpus = load_corpus(corpus_path(corpus_id).string());
      BuildOptions opts = options_from_params(
          record.at("method").get<std::string>(), record.value("params", json::object()));
      KnowledgeGraph g = build_graph(corpus, opts);
      save_graph(g, graph_path(id).string());
      put_graph(id, std::move(g));
      done["status"] = "done";
      done["graph_id"] = id;
    } catch (const std::exception& e) {
      done["status"] = "failed";
      done["error"] = e.what();
    }
    std::lock_guard<std::mutex> lk(jobs_mu);
    jobs[id] = done;
    persist_job(done);
  }

  void worker_loop() {
    while (true) {
      std::string id;
      {
        std::unique_lock<std::mutex> lk(jobs_mu);
        job_cv.wait(lk, [&] { return shutting_down || !queue.empty(); });
        if (shutting_down && queue.empty()) return;
        id = queue.front();
        queue.pop_front();
      }
      run_job(id);
    }
  }

  void register_routes();
};

void Service::Impl::register_routes() {
  server.Post("/corpora", [this](const httplib::Request& req,
                                 httplib::Response& res) {
    try {
      corpus_from_json_string(req.body, "request");
    } catch (const Error& e) {
      reply_error(res, 400, e.what());
      return;
    }
    std::string id = hex_id('c', fnv1a64(req.body));
    std::ofstream f(corpus_path(id), std::ios::binary);
    if (!f) {
      reply_error(res, 500, "cannot persist the corpus");
      return;
    }
    f << req.body;
    reply(res, 200, json{{"corpus_id", id}});
  });

  server.Post("/graphs", [this](const httplib::Request& req,
                                httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      reply_error(res, 400, std::string("invalid JSON: ") + e.what());
      return;
    }
    if (!body.contains("corpus_id") || !body["corpus_id"].is_string() ||
        !body.contains("method") || !body["method"].is_string()) {
      reply_error(res, 400, "body needs corpus_id and method");
      return;
    }
    std::string corpus_id = body["corpus_id"].get<std::string>();
    std::string method = body["method"].get<std::string>();
    json params = body.value("params", json::object());
    if (method != "tfidf" && method != "knn" && method != "entity" &&
        method != "merged") {
      reply_error(res, 400, "unknown method: " + method);
      return;
    }
    if (!fs::exists(corpus_path(corpus_id))) {
      reply_error(res, 404, "unknown corpus: " + corpus_id);
      return;
    }
    std::string job_id =
        hex_id('g', fnv1a64(corpus_id + "|" + method + "|" + params.dump()));
    {
      std::lock_guard<std::mutex> lk(jobs_mu);
      auto it = jobs.find(job_id);
      bool enqueue = it == jobs.end() ||
                     it->second.value("status", "") == "failed";
      if (enqueue) {
        json record{{"job_id", job_id}, {"corpus_id", corpus_id},
                    {"method", method}, {"params", params},
                    {"status", "queued"}};
        jobs[job_id] = record;
        persist_job(record);
        queue.push_back(job_id);
        job_cv.notify_one();
      }
    }
    reply(res, 202, json{{"job_id", job_id}});
  });

  server.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req,
                                        httplib::Response& res) {
    std::lock_guard<std::mutex> lk(jobs_mu);
    auto it = jobs.find(req.matches[1]);
    if (it == jobs.end()) {
      reply_error(res, 404, "unknown job: " + std::string(req.matches[1]));
      return;
    }
    reply(res, 200, it->second);
  });

  server.Get(R"(/graphs/([^/]+)/stats)", [this](const httplib::Request& req,
                                                httplib::Response& res) {
    auto g = get_graph(req.matches[1]);
    if (!g) {
      reply_error(res, 404, "unknown graph: " + std::string(req.matches[1]));
      return;
    }
    json j = stats_json(*g);
    j["graph_id"] = std::string(req.matches[1]);
    reply(res, 200, j);
  });

  server.Post(R"(/graphs/([^/]+)/query)", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
    auto g = get_graph(req.matches[1]);
    if (!g) {
      reply_error(res, 404, "unknown graph: " + std::string(req.matches[1]));
      return;
    }
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      reply_error(res, 400, std::string("invalid JSON: ") + e.what());
      return;
    }
    if (!body.contains("question") || !body["question"].is_string()) {
      reply_error(res, 400, "body needs a question");
      return;
    }
    try {
      Question q = classify_question(body["question"].get<std::string>());
      std::string mode = body.value("mode", std::string("auto"));
      if (mode == "content") {
        q.kind = QuestionKind::content;
      } else if (mode == "structural") {
        q.kind = QuestionKind::structural;
      } else if (mode != "auto") {
        reply_error(res, 400, "unknown mode: " + mode);
        return;
      }

      RetrievalResult result;
      if (q.kind == QuestionKind::structural) {
        result = retrieve_structural(*g, q);
      } else {
        TraversalConfig cfg;
        cfg.budget_K = body.value("budget_K", cfg.budget_K);
        cfg.branching = body.value("branching", cfg.branching);
        cfg.seed_count = body.value("seed_count", cfg.seed_count);
        cfg.max_hops = body.value("max_hops", cfg.max_hops);
        std::string agent_name = body.value("agent", std::string("tfidf"));
        std::unique_ptr<Agent> agent;
        if (agent_name == "tfidf") {
          agent = std::make_unique<TfIdfAgent>(*g);
        } else if (agent_name == "oracle") {
          if (!body.contains("gold") || !body["gold"].is_array()) {
            reply_error(res, 400, "oracle agent needs a gold text array");
            return;
          }
          agent = std::make_unique<OracleAgent>(
              body["gold"].get<std::vector<std::string>>());
        } else {
          reply_error(res, 400, "unknown agent: " + agent_name);
          return;
        }
        result = retrieve(*g, q, *agent, cfg);
      }

      json paths = json::array();
      for (const auto& p : result.paths) {
        paths.push_back(json{{"node_ids", p.node_ids},
                             {"evidence", p.evidence}});
      }
      std::string prompt = format_prompt(q, result);
      reply(res, 200,
            json{{"kind", q.kind == QuestionKind::structural ? "structural"
                                                             : "content"},
                 {"context_passages", result.context_passages},
                 {"context_texts", result.context_texts},
                 {"structural_payloads", result.structural_payloads},
                 {"paths", paths},
                 {"prompt", prompt},
                 {"seed_fallback", result.seed_fallback},
                 {"budget_shortfall", result.budget_shortfall}});
    } catch (const StructureNotFoundError& e) {
      reply_error(res, 404, e.what());
    } catch (const Error& e) {
      reply_error(res, 400, e.what());
    }
  });

  server.Post(R"(/graphs/([^/]+)/documents)",
              [this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    auto lock = graph_lock(id);
    std::lock_guard<std::mutex> lk(*lock);
    auto g = get_graph(id);
    if (!g) {
      reply_error(res, 404, "unknown graph: " + id);
      return;
    }
    try {
      json wrapper{{"documents", json::array({json::parse(req.body)})}};
      Corpus one = corpus_from_json_string(wrapper.dump(), "request");
      KnowledgeGraph next = add_document(*g, one.documents.at(0), {});
      save_graph(next, graph_path(id).string());
      json stats = stats_json(next);
      put_graph(id, std::move(next));
      reply(res, 200, json{{"status", "ok"}, {"stats", stats}});
    } catch (const json::exception& e) {
      reply_error(res, 400, std::string("invalid JSON: ") + e.what());
    } catch (const IdError& e) {
      reply_error(res, 409, e.what());
    } catch (const Error& e) {
      reply_error(res, 400, e.what());
    }
  });

  server.Delete(R"(/graphs/([^/]+)/documents/([^/]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    std::string doc_id = req.matches[2];
    auto lock = graph_lock(id);
    std::lock_guard<std::mutex> lk(*lock);
    auto g = get_graph(id);
    if (!g) {
      reply_error(res, 404, "unknown graph: " + id);
      return;
    }
    try {
      KnowledgeGraph next = remove_document(*g, doc_id);
      save_graph(next, graph_path(id).string());
      json stats = stats_json(next);
      put_graph(id, std::move(next));
      reply(res, 200, json{{"status", "ok"}, {"stats", stats}});
    } catch (const IdError& e) {
      reply_error(res, 404, e.what());
    } catch (const Error& e) {
      reply_error(res, 400, e.what());
    }
  });
}

Service::Service(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::start() {
  fs::create_directories(impl_->corpora_dir());
  fs::create_directories(impl_->graphs_dir());
  fs::create_directories(impl_->jobs_dir());
  impl_->load_jobs();
  impl_->register_routes();

  if (impl_->config.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(impl_->config.host);
    if (impl_->bound_port <= 0) throw InputError("cannot bind a free port");
  } else {
    if (!impl_->server.bind_to_port(impl_->config.host, impl_->config.port))
      throw InputError("cannot bind port " +
                       std::to_string(impl_->config.port));
    impl_->bound_port = impl_->config.port;
  }

  int n_workers = std::max(1, impl_->config.build_workers);
  for (int i = 0; i < n_workers; ++i) {
    impl_->workers.emplace_back([this] { impl_->worker_loop(); });
  }
  impl_->job_cv.notify_all();

  impl_->server_thread = std::thread([this] {
    impl_->server.listen_after_bind();
  });
  for (int i = 0; i < 200 && !impl_->server.is_running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return impl_->bound_port;
}

void Service::stop() {
  if (!impl_) return;
  {
    std::lock_guard<std::mutex> lk(impl_->jobs_mu);
    if (impl_->shutting_down) return;
    impl_->shutting_down = true;
  }
  impl_->job_cv.notify_all();
  for (auto& w : impl_->workers) {
    if (w.joinable()) w.join();
  }
  impl_->workers.clear();
  impl_->server.stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

}  // namespace kgp
