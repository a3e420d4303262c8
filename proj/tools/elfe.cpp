// elfe: verify controlled-English proof texts, or serve the HTTP API.

#include <csignal>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "elfe/error.hpp"
#include "elfe/library.hpp"
#include "elfe/pipeline.hpp"
#include "elfe/service.hpp"

namespace {

namespace fs = std::filesystem;

enum Exit { kVerified = 0, kFailed = 1, kUnknown = 2, kUsage = 3 };

struct VerifyFlags {
  std::string file;
  std::vector<std::string> libs;
  std::vector<std::string> backends;
  double timeout = elfe::kDefaultTimeoutSeconds;
  int jobs = 0;
  bool no_case_completeness = false;
  bool deterministic = false;
  std::optional<std::string> keep_tptp;
  bool json = false;
};

void indent(std::ostream& out, const std::string& text, const char* pad) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << pad << line << "\n";
}

void print_check(std::ostream& out, const elfe::CheckedObligation& c) {
  const auto& ob = c.obligation;
  const auto& v = *c.verdict;
  out << fmt::format("CHECK {} line {} ... ", ob.id, ob.origin.line);
  switch (v.kind) {
    case elfe::Verdict::Kind::kProved:
      out << fmt::format("PROVED by {} ({} ms)\n", v.backend, v.ms);
      return;
    case elfe::Verdict::Kind::kUnknown:
      out << fmt::format("UNKNOWN ({}: {})\n", to_string(v.reason), v.details);
      return;
    case elfe::Verdict::Kind::kDisproved:
      break;
  }
  out << fmt::format("FAILED ({} ms)\n", v.ms);
  out << "  goal: " << to_string(ob.goal) << "\n";
  out << "  premises:\n";
  for (const auto& p : ob.premises) {
    out << fmt::format("    {}: {}\n", p.label, to_string(p.formula));
  }
  if (v.countermodel) {
    out << fmt::format("  countermodel (found by {}):\n", v.backend);
    indent(out, format_model(*v.countermodel), "    ");
  }
}

int verify(const VerifyFlags& flags) {
  elfe::VerifyOptions options;
  options.timeout_s = flags.timeout;
  options.jobs = flags.jobs;
  options.case_completeness = !flags.no_case_completeness;
  options.deterministic = flags.deterministic;
  try {
    for (const auto& spec : flags.backends) {
      options.backends.push_back(elfe::backend_from_spec(spec, flags.timeout));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (flags.keep_tptp) {
    options.keep_tptp = flags.keep_tptp->empty()
                            ? fs::path(fs::path(flags.file).stem().string() + "-tptp")
                            : fs::path(*flags.keep_tptp);
  }

  std::vector<fs::path> paths(flags.libs.begin(), flags.libs.end());
  elfe::LibraryStore libraries(paths);
  elfe::VerifyEvents events;
  if (!flags.json) {
    events.assumed = [](const elfe::AssumedEntry& a) {
      if (a.kind == "library") {
        std::cout << fmt::format("ASSUMED {} (library: {})\n", a.label, a.detail);
      } else if (a.kind == "assumption") {
        std::cout << fmt::format("ASSUMED {} line {}: {}\n", a.label, a.line, a.detail);
      } else {
        std::cout << fmt::format("ASSUMED {} ({}, line {})\n", a.label, a.kind, a.line);
      }
    };
    events.checked = [](const elfe::CheckedObligation& c) {
      print_check(std::cout, c);
      std::cout.flush();
    };
  }

  elfe::VerifyResult result;
  try {
    result = elfe::verify_text(elfe::read_file(flags.file), libraries, options, events);
  } catch (const elfe::ElfeError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << flags.file << ":" << d.format() << "\n";
    return kUsage;
  }

  const auto& r = result.report;
  if (flags.json) {
    std::cout << elfe::report_json(result);
  } else {
    std::cout << "\nSummary\n";
    std::cout << fmt::format("  obligations: {}\n", r.obligations.size());
    std::cout << fmt::format("  verified:    {}\n", r.proved);
    std::cout << fmt::format("  failed:      {}\n", r.failed);
    std::cout << fmt::format("  unknown:     {}\n", r.unknown);
    std::cout << fmt::format("  wall time:   {} ms\n", r.wall_ms);
    for (const auto& [backend, n] : r.by_backend) {
      std::cout << fmt::format("  proved by {}: {}\n", backend, n);
    }
    if (options.keep_tptp) std::cout << "  tptp files:  " << options.keep_tptp->string() << "\n";
    std::cout << "status: " << to_string(r.status) << "\n";
  }
  switch (r.status) {
    case elfe::VerificationReport::Status::kVerified:
      return kVerified;
    case elfe::VerificationReport::Status::kFailed:
      return kFailed;
    case elfe::VerificationReport::Status::kUnknown:
      return kUnknown;
  }
  return kUnknown;
}

elfe::Service* running_service = nullptr;

void on_signal(int) {
  if (running_service) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker for proofs written in controlled English"};
  app.require_subcommand(1);

  VerifyFlags vf;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a document");
  verify_cmd->add_option("file", vf.file, "Document to verify")->required();
  verify_cmd->add_option("--lib", vf.libs, "Library directory (repeatable, searched first)");
  verify_cmd->add_option("--backend", vf.backends,
                         "resolution | modelfinder | eprover | vampire | NAME=COMMAND with {file}");
  verify_cmd->add_option("--timeout", vf.timeout, "Seconds per obligation")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--jobs", vf.jobs, "Obligations checked in parallel (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_flag("--no-case-completeness", vf.no_case_completeness,
                       "Do not check that case splits are exhaustive");
  verify_cmd->add_flag("--deterministic", vf.deterministic,
                       "One worker, builtin backends, timings reported as 0");
  verify_cmd->add_option("--keep-tptp", vf.keep_tptp, "Keep one .p file per obligation in DIR")
      ->expected(0, 1)
      ->default_str("");
  verify_cmd->add_flag("--json", vf.json, "Print the machine-readable report");

  elfe::ServiceConfig sc;
  std::vector<std::string> serve_libs;
  std::vector<std::string> serve_backends;
  std::string corpus;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API (env: PORT, LIB_DIR, TIMEOUT_S)");
  auto* host_opt = serve_cmd->add_option("--host", sc.host, "Bind address");
  auto* port_opt = serve_cmd->add_option("--port", sc.port, "Port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--lib", serve_libs, "Library directory (repeatable)");
  auto* timeout_opt = serve_cmd->add_option("--timeout", sc.timeout_s, "Seconds per obligation")
                          ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--backend", serve_backends, "Extra backend, as for verify");
  serve_cmd->add_option("--corpus", corpus, "Directory with corpus.manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (verify_cmd->parsed()) return verify(vf);

  try {
    elfe::ServiceConfig config = elfe::apply_environment({});
    if (*host_opt) config.host = sc.host;
    if (*port_opt) config.port = sc.port;
    if (*timeout_opt) config.timeout_s = sc.timeout_s;
    for (auto it = serve_libs.rbegin(); it != serve_libs.rend(); ++it) {
      config.lib_paths.insert(config.lib_paths.begin(), *it);
    }
    if (!corpus.empty()) config.corpus_dir = corpus;
    for (const auto& spec : serve_backends) {
      config.backends.push_back(elfe::backend_from_spec(spec, config.timeout_s));
    }
    elfe::Service service(config);
    running_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << fmt::format("listening on {}:{}\n", config.host, config.port);
    service.run();
    running_service = nullptr;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return 0;
}
