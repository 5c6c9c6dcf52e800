// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

namespace kgp {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string data_dir = "kgp_data";
  int build_workers = 2;
};

// Merges the JSON file named by KGP_CONFIG (keys: port, data_dir,
// workers, host) over the defaults.
ServiceConfig service_config_from_env();

// HTTP front end. Corpora, graphs, and job records live under data_dir,
// so finished builds survive a restart. Graph builds run on a small
// worker pool; queries run concurrently against immutable graph
// snapshots while per-graph mutations are serialized.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds, spawns the server thread, and returns the bound port.
  int start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kgp
