#include "elfe/backend.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "elfe/model.hpp"
#include "elfe/resolution.hpp"
#include "elfe/tptp.hpp"

namespace elfe {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string_view to_string(BackendConfig::Kind kind) {
  switch (kind) {
    case BackendConfig::Kind::kExternalTptp:
      return "external-tptp";
    case BackendConfig::Kind::kBuiltinResolution:
      return "builtin-resolution";
    case BackendConfig::Kind::kBuiltinModelFinder:
      return "builtin-modelfinder";
  }
  return "?";
}

std::vector<BackendConfig> default_backends(double timeout_s) {
  return {
      {"resolution", BackendConfig::Kind::kBuiltinResolution, "", timeout_s, true},
      {"modelfinder", BackendConfig::Kind::kBuiltinModelFinder, "", timeout_s, true},
  };
}

BackendConfig backend_from_spec(std::string_view spec, double timeout_s) {
  if (timeout_s <= 0) throw std::invalid_argument("timeout must be positive");
  auto eq = spec.find('=');
  if (eq != std::string_view::npos) {
    std::string name(spec.substr(0, eq));
    std::string command(spec.substr(eq + 1));
    if (name.empty() || command.find("{file}") == std::string::npos) {
      throw std::invalid_argument(
          fmt::format("backend '{}': expected <name>=<command with {{file}}>", spec));
    }
    return {name, BackendConfig::Kind::kExternalTptp, command, timeout_s, true};
  }
  if (spec == "resolution") {
    return {"resolution", BackendConfig::Kind::kBuiltinResolution, "", timeout_s, true};
  }
  if (spec == "modelfinder") {
    return {"modelfinder", BackendConfig::Kind::kBuiltinModelFinder, "", timeout_s, true};
  }
  if (spec == "eprover") {
    return {"eprover", BackendConfig::Kind::kExternalTptp,
            "eprover --auto --tptp3-format --cpu-limit={timeout} -s {file}", timeout_s, true};
  }
  if (spec == "vampire") {
    return {"vampire", BackendConfig::Kind::kExternalTptp, "vampire --mode casc -t {timeout} {file}",
            timeout_s, true};
  }
  throw std::invalid_argument(fmt::format("unknown backend '{}'", spec));
}

std::string_view to_string(SzsStatus status) {
  switch (status) {
    case SzsStatus::kTheorem:
      return "theorem";
    case SzsStatus::kCounterSatisfiable:
      return "countersatisfiable";
    case SzsStatus::kTimeout:
      return "timeout";
    case SzsStatus::kUnknown:
      return "unknown";
  }
  return "?";
}

SzsStatus parse_szs(std::string_view output) {
  static const std::regex kStatus(R"(SZS status\s+([A-Za-z]+))");
  std::string text(output);
  std::smatch m;
  if (!std::regex_search(text, m, kStatus)) return SzsStatus::kUnknown;
  const std::string s = m[1];
  if (s == "Theorem" || s == "Unsatisfiable" || s == "ContradictoryAxioms") {
    return SzsStatus::kTheorem;
  }
  if (s == "CounterSatisfiable" || s == "Satisfiable") return SzsStatus::kCounterSatisfiable;
  if (s == "Timeout" || s == "ResourceOut") return SzsStatus::kTimeout;
  return SzsStatus::kUnknown;
}

namespace {

bool executable_on_path(const std::string& program) {
  if (program.find('/') != std::string::npos) return ::access(program.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    if (::access((fs::path(dir) / program).c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s,
                          const std::atomic<bool>* cancel) {
  if (argv.empty()) throw BackendSpawnError("empty command");
  if (!executable_on_path(argv[0])) throw BackendSpawnError(argv[0] + ": not found");
  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC) != 0) throw BackendSpawnError("pipe failed");

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipe_fds[0]);
    ::close(pipe_fds[1]);
    throw BackendSpawnError("fork failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    ::dup2(pipe_fds[1], 1);
    ::dup2(pipe_fds[1], 2);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(pipe_fds[1]);

  ProcessResult result;
  const auto deadline = Clock::now() + std::chrono::duration<double>(timeout_s);
  char buffer[4096];
  bool open = true;
  while (open) {
    if (cancel && cancel->load()) {
      result.cancelled = true;
      break;
    }
    if (Clock::now() > deadline) {
      result.timed_out = true;
      break;
    }
    pollfd p{pipe_fds[0], POLLIN, 0};
    int ready = ::poll(&p, 1, 50);
    if (ready > 0) {
      ssize_t n = ::read(pipe_fds[0], buffer, sizeof buffer);
      if (n > 0) {
        result.output.append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0) {
        open = false;
      }
    }
  }
  if (open) ::kill(-pid, SIGKILL);
  ::close(pipe_fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  // Grandchildren may still hold the group; make sure it is gone.
  ::kill(-pid, SIGKILL);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (result.exit_code == 127 && result.output.empty()) {
    throw BackendSpawnError(argv[0] + ": exec failed");
  }
  return result;
}

std::vector<std::string> expand_command(std::string_view command_template,
                                        const std::string& file, double timeout_s) {
  std::vector<std::string> out;
  std::istringstream words{std::string(command_template)};
  std::string word;
  const std::string seconds = std::to_string(std::max(1, static_cast<int>(timeout_s + 0.999)));
  while (words >> word) {
    for (auto [key, value] : {std::pair<std::string, std::string>{"{file}", file},
                              std::pair<std::string, std::string>{"{timeout}", seconds}}) {
      for (auto pos = word.find(key); pos != std::string::npos; pos = word.find(key, pos)) {
        word.replace(pos, key.size(), value);
        pos += value.size();
      }
    }
    out.push_back(word);
  }
  return out;
}

std::string tptp_file_name(const Obligation& ob) {
  std::string name;
  for (char c : ob.id) {
    bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    name += plain ? c : '_';
  }
  return name + ".p";
}

namespace {

long long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

int reason_rank(Verdict::Reason r) {
  switch (r) {
    case Verdict::Reason::kSaturated:
      return 3;
    case Verdict::Reason::kTimeout:
      return 2;
    case Verdict::Reason::kError:
      return 1;
    case Verdict::Reason::kNone:
      return 0;
  }
  return 0;
}

// Verdict collection shared by the racing workers.
class Race {
 public:
  explicit Race(const std::atomic<bool>* outer) : outer_(outer) {}

  // True once a decisive verdict is in or the caller gave up.
  const std::atomic<bool>* flag() const { return &cancel_; }

  void offer(Verdict v) {
    std::lock_guard lock(mutex_);
    if (decisive_) return;
    if (v.kind != Verdict::Kind::kUnknown) {
      decisive_ = std::move(v);
      cancel_ = true;
      return;
    }
    if (!fallback_ || reason_rank(v.reason) > reason_rank(fallback_->reason)) {
      fallback_ = std::move(v);
    }
  }

  void forward_cancel() {
    if (outer_ && outer_->load()) cancel_ = true;
  }

  Verdict result(long long ms) {
    std::lock_guard lock(mutex_);
    if (decisive_) return *decisive_;
    if (fallback_) {
      fallback_->ms = ms;
      return *fallback_;
    }
    return Verdict::unknown(Verdict::Reason::kTimeout, "no backend reached a verdict", ms);
  }

 private:
  const std::atomic<bool>* outer_;
  std::atomic<bool> cancel_{false};
  std::mutex mutex_;
  std::optional<Verdict> decisive_;
  std::optional<Verdict> fallback_;
};

Verdict run_resolution(const Obligation& ob, const BackendConfig& cfg,
                       const std::atomic<bool>* cancel) {
  const auto start = Clock::now();
  std::vector<Formula> usable;
  std::vector<Formula> support;
  for (const auto& p : ob.premises) (p.local ? support : usable).push_back(p.formula);
  ProverLimits limits;
  limits.max_seconds = cfg.timeout_s;
  limits.cancel = cancel;
  ProofResult r = prove_sliced(usable, support, ob.goal, limits);
  switch (r.kind) {
    case ProofResult::Kind::kRefuted:
      return Verdict::proved(cfg.name, elapsed_ms(start));
    case ProofResult::Kind::kSaturated:
      return Verdict::unknown(Verdict::Reason::kSaturated,
                              fmt::format("{}: saturated after {} clauses", cfg.name, r.generated),
                              elapsed_ms(start));
    case ProofResult::Kind::kResourceOut:
      break;
  }
  return Verdict::unknown(Verdict::Reason::kTimeout,
                          fmt::format("{}: {} limit reached", cfg.name, to_string(r.limit)),
                          elapsed_ms(start));
}

std::optional<Verdict> run_model_finder(const Obligation& ob, const std::string& name,
                                        double timeout_s, int max_size,
                                        const std::atomic<bool>* cancel) {
  const auto start = Clock::now();
  ModelSearchLimits limits;
  limits.max_size = max_size;
  limits.budget_ms = static_cast<int>(timeout_s * 1000);
  limits.cancel = cancel;
  auto premises = ob.premise_formulas();
  auto model = find_countermodel(premises, ob.goal, limits);
  if (model && is_countermodel(*model, premises, ob.goal)) {
    return Verdict::disproved(name, std::move(*model), elapsed_ms(start));
  }
  return std::nullopt;
}

Verdict run_external(const Obligation& ob, const BackendConfig& cfg, const fs::path& file,
                     int max_size, const std::atomic<bool>* cancel) {
  const auto start = Clock::now();
  ProcessResult pr;
  try {
    pr = run_process(expand_command(cfg.command, file.string(), cfg.timeout_s), cfg.timeout_s,
                     cancel);
  } catch (const BackendSpawnError& e) {
    return Verdict::unknown(Verdict::Reason::kError, fmt::format("{}: {}", cfg.name, e.what()),
                            elapsed_ms(start));
  }
  if (pr.timed_out) {
    return Verdict::unknown(Verdict::Reason::kTimeout, cfg.name + ": timeout", elapsed_ms(start));
  }
  switch (parse_szs(pr.output)) {
    case SzsStatus::kTheorem:
      return Verdict::proved(cfg.name, elapsed_ms(start));
    case SzsStatus::kCounterSatisfiable: {
      // External provers give no usable model; rebuild one we can check.
      double left = cfg.timeout_s - static_cast<double>(elapsed_ms(start)) / 1000.0;
      if (auto v = run_model_finder(ob, cfg.name, std::max(left, 1.0), max_size, cancel)) {
        return *v;
      }
      return Verdict::unknown(Verdict::Reason::kSaturated,
                              cfg.name + ": countersatisfiable, no finite model found",
                              elapsed_ms(start));
    }
    case SzsStatus::kTimeout:
      return Verdict::unknown(Verdict::Reason::kTimeout, cfg.name + ": timeout",
                              elapsed_ms(start));
    case SzsStatus::kUnknown:
      break;
  }
  return Verdict::unknown(Verdict::Reason::kError,
                          fmt::format("{}: no SZS status (exit {})", cfg.name, pr.exit_code),
                          elapsed_ms(start));
}

fs::path make_temp_dir() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path p = fs::temp_directory_path() / fmt::format("elfe-{:016x}", rng());
    if (fs::create_directory(p)) return p;
  }
  throw std::runtime_error("cannot create temporary directory");
}

}  // namespace

Verdict dispatch(const Obligation& ob, std::span<const BackendConfig> backends,
                 const DispatchOptions& options) {
  std::vector<const BackendConfig*> active;
  for (const auto& b : backends) {
    if (b.enabled) active.push_back(&b);
  }
  if (active.empty()) throw std::invalid_argument("dispatch: no enabled backend");

  const auto start = Clock::now();
  bool external = std::any_of(active.begin(), active.end(), [](const BackendConfig* b) {
    return b->kind == BackendConfig::Kind::kExternalTptp;
  });
  fs::path file;
  std::optional<fs::path> temp_dir;
  if (external || options.tptp_dir) {
    fs::path dir = options.tptp_dir ? *options.tptp_dir : *(temp_dir = make_temp_dir());
    fs::create_directories(dir);
    file = dir / tptp_file_name(ob);
    std::ofstream(file) << to_tptp(ob);
  }

  Race race(options.cancel);
  std::vector<std::thread> workers;
  for (const BackendConfig* b : active) {
    workers.emplace_back([&, b] {
      try {
        switch (b->kind) {
          case BackendConfig::Kind::kBuiltinResolution:
            race.offer(run_resolution(ob, *b, race.flag()));
            break;
          case BackendConfig::Kind::kBuiltinModelFinder:
            if (auto v = run_model_finder(ob, b->name, b->timeout_s, options.model_max_size,
                                          race.flag())) {
              race.offer(std::move(*v));
            }
            break;
          case BackendConfig::Kind::kExternalTptp:
            race.offer(run_external(ob, *b, file, options.model_max_size, race.flag()));
            break;
        }
      } catch (const std::exception& e) {
        race.offer(Verdict::unknown(Verdict::Reason::kError,
                                    fmt::format("{}: {}", b->name, e.what())));
      }
    });
  }
  std::thread watcher;
  std::atomic<bool> done{false};
  if (options.cancel) {
    watcher = std::thread([&] {
      while (!done) {
        race.forward_cancel();
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
    });
  }
  for (auto& w : workers) w.join();
  done = true;
  if (watcher.joinable()) watcher.join();
  if (temp_dir) {
    std::error_code ec;
    fs::remove_all(*temp_dir, ec);
  }
  return race.result(elapsed_ms(start));
}

}  // namespace elfe
