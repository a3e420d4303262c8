#include "elfe/pipeline.hpp"

#include <cctype>
#include <chrono>
#include <map>
#include <set>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "elfe/desugar.hpp"
#include "elfe/sequence.hpp"
#include "elfe/surface.hpp"
#include "report_json.hpp"

namespace elfe {

std::vector<BackendConfig> effective_backends(const VerifyOptions& options) {
  std::vector<BackendConfig> out = options.backends;
  // The builtin prover and model finder always take part.
  for (const auto& builtin : default_backends(options.timeout_s)) {
    bool present = std::any_of(out.begin(), out.end(),
                               [&](const BackendConfig& b) { return b.kind == builtin.kind; });
    if (!present) out.push_back(builtin);
  }
  if (options.deterministic) {
    std::erase_if(out, [](const BackendConfig& b) {
      return b.kind == BackendConfig::Kind::kExternalTptp;
    });
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Plan {
  std::vector<AssumedEntry> assumed;
  std::vector<int> lines;
  std::vector<Obligation> obligations;
};

Plan plan_document(const Document& doc, LibraryStore& libraries, const VerifyOptions& options) {
  Plan plan;
  for (const auto& name : doc.includes) {
    auto lib = libraries.load(name);
    std::map<DeclKind, int> counts;
    for (const auto& p : lib->scope.premises) ++counts[p.kind];
    plan.assumed.push_back({name, "library", 0,
                            fmt::format("{} axioms, {} definitions, {} lemmas",
                                        counts[DeclKind::kAxiom], counts[DeclKind::kDefinition],
                                        counts[DeclKind::kLemma])});
  }
  std::set<int> lines;
  BuildOptions build;
  build.case_completeness = options.case_completeness;
  for (std::size_t i = 0; i < doc.decls.size(); ++i) {
    const Decl& d = doc.decls[i];
    lines.insert(d.where.line);
    if (d.kind != DeclKind::kLemma) {
      std::string kind(to_string(d.kind));
      kind[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(kind[0])));
      plan.assumed.push_back({d.label, kind, d.where.line, ""});
      continue;
    }
    auto seq = build_sequence(d, doc.ambient_for(i), build);
    for (const Statement* s : seq.all()) {
      lines.insert(s->origin.line);
      if (s->kind == ProofKind::kAssumed) {
        plan.assumed.push_back(
            {fmt::format("{}/{}", seq.lemma, s->id), "assumption", s->origin.line,
             to_string(s->goal)});
      }
    }
    for (auto& ob : derive_obligations(seq)) plan.obligations.push_back(std::move(ob));
  }
  plan.lines.assign(lines.begin(), lines.end());
  return plan;
}

}  // namespace

VerifyResult verify_text(const std::string& text, LibraryStore& libraries,
                         const VerifyOptions& options, const VerifyEvents& events,
                         const std::atomic<bool>* cancel) {
  const auto start = Clock::now();
  Document doc = desugar(parse_document(text), libraries.resolver());
  Plan plan = plan_document(doc, libraries, options);

  VerifyResult result;
  result.assumed = plan.assumed;
  result.statement_lines = plan.lines;
  if (events.assumed) {
    for (const auto& a : plan.assumed) events.assumed(a);
  }
  if (events.planned) events.planned(plan.obligations, plan.lines);

  const auto backends = effective_backends(options);
  DispatchOptions dispatch_options;
  dispatch_options.tptp_dir = options.keep_tptp;
  dispatch_options.cancel = cancel;

  std::vector<CheckedObligation> checked(plan.obligations.size());
  for (std::size_t i = 0; i < checked.size(); ++i) checked[i].obligation = plan.obligations[i];

  int jobs = options.deterministic ? 1 : options.jobs;
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, checked.size())));

  std::mutex mutex;
  std::size_t next = 0;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(mutex);
        if (next >= checked.size() || (cancel && cancel->load())) return;
        i = next++;
      }
      Verdict v = dispatch(checked[i].obligation, backends, dispatch_options);
      if (options.deterministic) v.ms = 0;
      if (cancel && cancel->load() && v.kind == Verdict::Kind::kUnknown) return;
      std::lock_guard lock(mutex);
      checked[i].verdict = std::move(v);
      if (events.checked) events.checked(checked[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  long long wall = options.deterministic
                       ? 0
                       : std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
                             .count();
  result.report = assemble_report(std::move(checked), plan.lines, wall);
  return result;
}

nlohmann::ordered_json model_json(const Model& m) {
  nlohmann::ordered_json j;
  j["size"] = m.size;
  j["constants"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : m.constants) j["constants"][name] = value;
  j["functions"] = nlohmann::ordered_json::object();
  for (const auto& [name, table] : m.functions) {
    j["functions"][name] = {{"arity", table.arity}, {"values", table.values}};
  }
  j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& [name, table] : m.predicates) {
    std::vector<int> args(table.arity, 0);
    for (std::size_t row = 0; row < table.values.size(); ++row) {
      std::size_t r = row;
      for (std::size_t k = table.arity; k-- > 0;) {
        args[k] = static_cast<int>(r % static_cast<std::size_t>(m.size));
        r /= static_cast<std::size_t>(m.size);
      }
      if (!table.values[row]) continue;
      j["atoms"].push_back(args.empty() ? name : fmt::format("{}({})", name, fmt::join(args, ",")));
    }
  }
  j["text"] = format_model(m);
  return j;
}

nlohmann::ordered_json obligation_json(const CheckedObligation& c) {
  const Obligation& ob = c.obligation;
  nlohmann::ordered_json j;
  j["id"] = ob.id;
  j["lemma"] = ob.lemma;
  j["line"] = ob.origin.line;
  j["statement"] = ob.statement;
  j["role"] = std::string(to_string(ob.role));
  j["goal"] = to_string(ob.goal);
  j["premises"] = nlohmann::ordered_json::array();
  for (const auto& p : ob.premises) j["premises"].push_back(p.label);
  j["restricted"] = ob.restricted;
  if (!c.verdict) {
    j["verdict"] = "pending";
    return j;
  }
  const Verdict& v = *c.verdict;
  j["verdict"] = std::string(to_string(v.kind));
  j["backend"] = v.backend;
  j["ms"] = v.ms;
  if (v.kind == Verdict::Kind::kUnknown) {
    j["reason"] = std::string(to_string(v.reason));
    j["details"] = v.details;
  }
  if (v.countermodel) j["countermodel"] = model_json(*v.countermodel);
  return j;
}

nlohmann::ordered_json report_object(const VerifyResult& result) {
  const VerificationReport& r = result.report;
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(r.status));
  j["lines"] = nlohmann::ordered_json::array();
  for (const auto& [line, status] : r.lines) {
    j["lines"].push_back({{"line", line}, {"status", std::string(to_string(status))}});
  }
  j["obligations"] = nlohmann::ordered_json::array();
  for (const auto& c : r.obligations) j["obligations"].push_back(obligation_json(c));
  j["assumed"] = nlohmann::ordered_json::array();
  for (const auto& a : result.assumed) {
    j["assumed"].push_back({{"label", a.label}, {"kind", a.kind}, {"line", a.line}});
  }
  nlohmann::ordered_json by_backend = nlohmann::ordered_json::object();
  for (const auto& [name, n] : r.by_backend) by_backend[name] = n;
  std::size_t pending = r.obligations.size() - r.proved - r.failed - r.unknown;
  j["stats"] = {{"obligations", r.obligations.size()},
                {"proved", r.proved},
                {"failed", r.failed},
                {"unknown", r.unknown},
                {"pending", pending},
                {"wall_ms", r.wall_ms},
                {"by_backend", by_backend}};
  return j;
}

std::string report_json(const VerifyResult& result) { return report_object(result).dump(2) + "\n"; }

}  // namespace elfe
