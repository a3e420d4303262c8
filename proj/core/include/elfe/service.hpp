#ifndef ELFE_SERVICE_HPP_
#define ELFE_SERVICE_HPP_

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "elfe/backend.hpp"

namespace elfe {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::vector<std::filesystem::path> lib_paths;
  std::filesystem::path corpus_dir;  // empty: bundled corpus
  double timeout_s = kDefaultTimeoutSeconds;
  std::vector<BackendConfig> backends;  // empty: builtin defaults
  std::size_t max_body = 256 * 1024;
  std::chrono::seconds job_ttl{3600};
  int runners = 2;  // jobs verified concurrently
  int jobs = 0;     // obligation workers per job
};

// Applies PORT, LIB_DIR and TIMEOUT_S when set. Throws std::invalid_argument
// on malformed values.
ServiceConfig apply_environment(ServiceConfig config);

// HTTP front end. Routes:
//   POST /api/verify              {text, libraries?, options?} -> 202 {id}
//   GET  /api/jobs/{id}           state plus the report so far
//   GET  /api/jobs/{id}/report    final report, same bytes as `verify --json`
//   GET  /api/examples[/{name}]   bundled corpus
//   GET  /api/libraries[/{name}]  libraries on the search path
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace elfe

#endif  // ELFE_SERVICE_HPP_
