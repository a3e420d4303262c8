#include "elfe/service.hpp"

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "elfe/corpus.hpp"
#include "elfe/error.hpp"
#include "elfe/library.hpp"
#include "elfe/pipeline.hpp"
#include "report_json.hpp"

namespace elfe {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

ServiceConfig apply_environment(ServiceConfig config) {
  if (const char* port = std::getenv("PORT"); port && *port) {
    try {
      config.port = std::stoi(port);
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("PORT: not a number: '{}'", port));
    }
    if (config.port < 0 || config.port > 65535) throw std::invalid_argument("PORT: out of range");
  }
  if (const char* dir = std::getenv("LIB_DIR"); dir && *dir) {
    config.lib_paths.insert(config.lib_paths.begin(), fs::path(dir));
  }
  if (const char* t = std::getenv("TIMEOUT_S"); t && *t) {
    try {
      config.timeout_s = std::stod(t);
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("TIMEOUT_S: not a number: '{}'", t));
    }
    if (config.timeout_s <= 0) throw std::invalid_argument("TIMEOUT_S: must be positive");
  }
  return config;
}

namespace {

struct Job {
  enum class State { kQueued, kRunning, kDone, kError };

  std::string id;
  std::string text;
  std::map<std::string, std::string> libraries;
  VerifyOptions options;
  std::atomic<bool> cancel{false};

  std::mutex mutex;
  State state = State::kQueued;
  Clock::time_point started;
  Clock::time_point finished;
  std::vector<AssumedEntry> assumed;
  std::vector<int> lines;
  std::vector<CheckedObligation> progress;
  std::map<std::string, std::size_t> index;  // obligation id -> progress slot
  std::optional<VerifyResult> result;
  std::vector<Diagnostic> diagnostics;
  std::string failure;
};

std::string_view state_name(Job::State s) {
  switch (s) {
    case Job::State::kQueued:
      return "queued";
    case Job::State::kRunning:
      return "running";
    case Job::State::kDone:
      return "done";
    case Job::State::kError:
      return "error";
  }
  return "?";
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c)
      : config(std::move(c)),
        libraries(config.lib_paths),
        corpus(load_corpus(config.corpus_dir.empty() ? bundled_corpus_dir() : config.corpus_dir)),
        rng(std::random_device{}()) {
    routes();
    for (int i = 0; i < std::max(1, config.runners); ++i) runners.emplace_back([this] { run_jobs(); });
  }

  ~Impl() {
    server.stop();
    if (server_thread.joinable()) server_thread.join();
    {
      std::lock_guard lock(mutex);
      shutting_down = true;
      for (auto& [id, job] : jobs) job->cancel = true;
    }
    queue_cv.notify_all();
    for (auto& t : runners) t.join();
  }

  void routes() {
    server.set_payload_max_length(config.max_body);
    server.Post("/api/verify", [this](const httplib::Request& req, httplib::Response& res) {
      submit(req, res);
    });
    server.Get(R"(/api/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto job = lookup(req.matches[1]);
      if (!job) return send_error(res, 404, "unknown job");
      send_json(res, 200, job_json(*job));
    });
    server.Get(R"(/api/jobs/([^/]+)/report)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto job = lookup(req.matches[1]);
                 if (!job) return send_error(res, 404, "unknown job");
                 std::lock_guard lock(job->mutex);
                 if (job->state == Job::State::kError) return send_json(res, 422, error_json(*job));
                 if (job->state != Job::State::kDone) return send_error(res, 409, "job not finished");
                 res.status = 200;
                 res.set_content(report_json(*job->result), "application/json");
               });
    server.Get("/api/examples", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& e : corpus.manifest.examples) list.push_back({{"name", e.name}, {"file", e.file}});
      send_json(res, 200, list);
    });
    server.Get(R"(/api/examples/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      const CorpusExample* e = corpus.manifest.find(req.matches[1].str());
      if (!e) return send_error(res, 404, "unknown example");
      try {
        send_json(res, 200, {{"name", e->name}, {"file", e->file}, {"text", read_file(corpus.dir / e->file)}});
      } catch (const ElfeError& err) {
        send_error(res, 500, err.what());
      }
    });
    server.Get("/api/libraries", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& name : libraries.available()) list.push_back({{"name", name}});
      send_json(res, 200, list);
    });
    server.Get(R"(/api/libraries/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string name = req.matches[1];
      auto path = libraries.find(name);
      if (!path) return send_error(res, 404, "unknown library");
      try {
        auto lib = libraries.load(name);
        json labels = json::array();
        for (const auto& d : lib->document.decls) {
          labels.push_back({{"label", d.label}, {"kind", std::string(to_string(d.kind))}});
        }
        send_json(res, 200,
                  {{"name", name},
                   {"text", read_file(*path)},
                   {"notations", lib->own_notations.size()},
                   {"declarations", labels}});
      } catch (const ElfeError& err) {
        send_error(res, 500, err.what());
      }
    });
  }

  void submit(const httplib::Request& req, httplib::Response& res) {
    purge();
    if (req.body.size() > config.max_body) return send_error(res, 413, "document too large");
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "body must be a JSON object");
    if (!body.contains("text") || !body["text"].is_string()) {
      return send_error(res, 400, "field 'text' must be a string");
    }
    auto job = std::make_shared<Job>();
    job->text = body["text"].get<std::string>();
    job->options.timeout_s = config.timeout_s;
    job->options.jobs = config.jobs;
    if (body.contains("libraries")) {
      const auto& libs = body["libraries"];
      if (!libs.is_object()) return send_error(res, 400, "field 'libraries' must map names to text");
      for (const auto& [name, text] : libs.items()) {
        if (!text.is_string()) return send_error(res, 400, "library text must be a string");
        job->libraries[name] = text.get<std::string>();
      }
    }
    if (body.contains("options")) {
      if (auto problem = read_options(body["options"], job->options)) {
        return send_error(res, 400, *problem);
      }
    }
    if (job->options.backends.empty() && !config.backends.empty()) {
      job->options.backends = config.backends;
    }
    {
      std::lock_guard lock(mutex);
      job->id = fmt::format("{:016x}", rng());
      jobs[job->id] = job;
      queue.push_back(job);
    }
    queue_cv.notify_one();
    send_json(res, 202, {{"id", job->id}});
  }

  std::optional<std::string> read_options(const json& o, VerifyOptions& options) {
    if (!o.is_object()) return "field 'options' must be an object";
    try {
      if (o.contains("timeout")) {
        options.timeout_s = o["timeout"].get<double>();
        if (options.timeout_s <= 0) return "timeout must be positive";
      }
      if (o.contains("deterministic")) options.deterministic = o["deterministic"].get<bool>();
      if (o.contains("case_completeness")) {
        options.case_completeness = o["case_completeness"].get<bool>();
      }
      if (o.contains("jobs")) options.jobs = o["jobs"].get<int>();
      if (o.contains("backends")) {
        for (const auto& spec : o["backends"]) {
          options.backends.push_back(backend_from_spec(spec.get<std::string>(), options.timeout_s));
        }
      }
    } catch (const std::exception& e) {
      return fmt::format("bad options: {}", e.what());
    }
    return std::nullopt;
  }

  std::shared_ptr<Job> lookup(const std::string& id) {
    purge();
    std::lock_guard lock(mutex);
    auto it = jobs.find(id);
    return it == jobs.end() ? nullptr : it->second;
  }

  void purge() {
    std::lock_guard lock(mutex);
    const auto now = Clock::now();
    std::erase_if(jobs, [&](const auto& entry) {
      std::lock_guard job_lock(entry.second->mutex);
      bool over = entry.second->state == Job::State::kDone || entry.second->state == Job::State::kError;
      return over && now - entry.second->finished > config.job_ttl;
    });
  }

  void run_jobs() {
    while (true) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(mutex);
        queue_cv.wait(lock, [&] { return shutting_down || !queue.empty(); });
        if (shutting_down) return;
        job = queue.front();
        queue.pop_front();
      }
      execute(*job);
    }
  }

  void execute(Job& job) {
    {
      std::lock_guard lock(job.mutex);
      job.state = Job::State::kRunning;
      job.started = Clock::now();
    }
    VerifyEvents events;
    events.planned = [&](const std::vector<Obligation>& obs, const std::vector<int>& lines) {
      std::lock_guard lock(job.mutex);
      job.lines = lines;
      for (const auto& ob : obs) {
        job.index[ob.id] = job.progress.size();
        job.progress.push_back({ob, std::nullopt});
      }
    };
    events.assumed = [&](const AssumedEntry& a) {
      std::lock_guard lock(job.mutex);
      job.assumed.push_back(a);
    };
    events.checked = [&](const CheckedObligation& c) {
      std::lock_guard lock(job.mutex);
      job.progress[job.index.at(c.obligation.id)].verdict = c.verdict;
    };
    try {
      VerifyResult result;
      if (job.libraries.empty()) {
        result = verify_text(job.text, libraries, job.options, events, &job.cancel);
      } else {
        LibraryStore own(config.lib_paths);
        for (const auto& [name, text] : job.libraries) own.add_source(name, text);
        result = verify_text(job.text, own, job.options, events, &job.cancel);
      }
      std::lock_guard lock(job.mutex);
      job.result = std::move(result);
      job.state = Job::State::kDone;
    } catch (const ElfeError& e) {
      std::lock_guard lock(job.mutex);
      job.diagnostics = e.diagnostics();
      job.state = Job::State::kError;
    } catch (const std::exception& e) {
      std::lock_guard lock(job.mutex);
      job.failure = e.what();
      job.state = Job::State::kError;
    }
    std::lock_guard lock(job.mutex);
    job.finished = Clock::now();
  }

  static json error_json(const Job& job) {
    json diags = json::array();
    for (const auto& d : job.diagnostics) {
      diags.push_back({{"line", d.where.line},
                       {"column", d.where.column},
                       {"code", std::string(to_string(d.code))},
                       {"message", d.message}});
    }
    if (!job.failure.empty()) diags.push_back({{"message", job.failure}});
    return json{{"status", "error"}, {"diagnostics", diags}};
  }

  json job_json(Job& job) {
    std::lock_guard lock(job.mutex);
    json out{{"id", job.id}, {"state", std::string(state_name(job.state))}};
    json report;
    switch (job.state) {
      case Job::State::kDone:
        report = report_object(*job.result);
        break;
      case Job::State::kError:
        report = error_json(job);
        break;
      case Job::State::kQueued:
      case Job::State::kRunning: {
        VerifyResult partial;
        partial.assumed = job.assumed;
        partial.statement_lines = job.lines;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - job.started);
        partial.report = assemble_report(job.progress, job.lines,
                                         job.state == Job::State::kRunning ? ms.count() : 0);
        // Lines whose obligations are not in yet read as pending, not verified.
        report = report_object(partial);
        report["status"] = "pending";
        break;
      }
    }
    for (auto& [key, value] : report.items()) out[key] = value;
    return out;
  }

  int bind() {
    if (config.port == 0) return server.bind_to_any_port(config.host);
    if (!server.bind_to_port(config.host, config.port)) return -1;
    return config.port;
  }

  ServiceConfig config;
  LibraryStore libraries;
  Corpus corpus;
  httplib::Server server;
  std::thread server_thread;

  std::mutex mutex;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::deque<std::shared_ptr<Job>> queue;
  std::condition_variable queue_cv;
  std::vector<std::thread> runners;
  bool shutting_down = false;
  std::mt19937_64 rng;
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() = default;

int Service::start() {
  int port = impl_->bind();
  if (port < 0) {
    throw std::runtime_error(fmt::format("cannot bind {}:{}", impl_->config.host, impl_->config.port));
  }
  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::run() {
  if (impl_->bind() < 0) {
    throw std::runtime_error(fmt::format("cannot bind {}:{}", impl_->config.host, impl_->config.port));
  }
  impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

}  // namespace elfe
