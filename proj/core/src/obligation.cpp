#include "elfe/obligation.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace elfe {

std::vector<Formula> Obligation::premise_formulas() const {
  std::vector<Formula> out;
  for (const auto& p : premises) out.push_back(p.formula);
  return out;
}

std::vector<Obligation> derive_obligations(const StatementSequence& seq) {
  std::vector<Obligation> out;
  std::map<int, int> per_line;
  for (const Statement* s : seq.all()) {
    if (s->kind != ProofKind::kByContext) continue;
    Obligation ob;
    ob.lemma = seq.lemma;
    ob.statement = s->id;
    ob.role = s->role;
    ob.goal = s->goal;
    ob.origin = s->origin;
    ob.id = fmt::format("{}/{}/{}", seq.lemma, s->origin.line, ++per_line[s->origin.line]);
    auto context = visible_context(seq, *s);
    if (s->restriction) {
      ob.restricted = true;
      ob.restriction = *s->restriction;
      std::set<std::string> named(s->restriction->begin(), s->restriction->end());
      for (auto& p : context) {
        if (p.local || named.contains(p.label)) ob.premises.push_back(std::move(p));
      }
    } else {
      ob.premises = std::move(context);
    }
    out.push_back(std::move(ob));
  }
  return out;
}

Verdict Verdict::proved(std::string backend, long long ms) {
  Verdict v;
  v.kind = Kind::kProved;
  v.backend = std::move(backend);
  v.ms = ms;
  v.reason = Reason::kNone;
  return v;
}

Verdict Verdict::disproved(std::string backend, Model model, long long ms) {
  Verdict v;
  v.kind = Kind::kDisproved;
  v.backend = std::move(backend);
  v.countermodel = std::move(model);
  v.ms = ms;
  v.reason = Reason::kNone;
  return v;
}

Verdict Verdict::unknown(Reason reason, std::string details, long long ms) {
  Verdict v;
  v.kind = Kind::kUnknown;
  v.reason = reason;
  v.details = std::move(details);
  v.ms = ms;
  return v;
}

std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kProved:
      return "proved";
    case Verdict::Kind::kDisproved:
      return "disproved";
    case Verdict::Kind::kUnknown:
      return "unknown";
  }
  return "?";
}

std::string_view to_string(Verdict::Reason reason) {
  switch (reason) {
    case Verdict::Reason::kNone:
      return "none";
    case Verdict::Reason::kTimeout:
      return "timeout";
    case Verdict::Reason::kSaturated:
      return "saturated";
    case Verdict::Reason::kError:
      return "error";
  }
  return "?";
}

std::string_view to_string(LineStatus status) {
  switch (status) {
    case LineStatus::kVerified:
      return "verified";
    case LineStatus::kFailed:
      return "failed";
    case LineStatus::kUnknown:
      return "unknown";
    case LineStatus::kPending:
      return "pending";
  }
  return "?";
}

std::string_view to_string(VerificationReport::Status status) {
  switch (status) {
    case VerificationReport::Status::kVerified:
      return "verified";
    case VerificationReport::Status::kFailed:
      return "failed";
    case VerificationReport::Status::kUnknown:
      return "unknown";
  }
  return "?";
}

namespace {

int rank(LineStatus s) {
  switch (s) {
    case LineStatus::kVerified:
      return 0;
    case LineStatus::kPending:
      return 1;
    case LineStatus::kUnknown:
      return 2;
    case LineStatus::kFailed:
      return 3;
  }
  return 0;
}

}  // namespace

VerificationReport assemble_report(std::vector<CheckedObligation> checked,
                                   const std::vector<int>& statement_lines, long long wall_ms) {
  VerificationReport r;
  r.wall_ms = wall_ms;
  for (int line : statement_lines) r.lines.emplace(line, LineStatus::kVerified);
  bool pending = false;
  for (const auto& c : checked) {
    LineStatus s = LineStatus::kPending;
    if (!c.verdict) {
      pending = true;
    } else {
      switch (c.verdict->kind) {
        case Verdict::Kind::kProved:
          s = LineStatus::kVerified;
          ++r.proved;
          ++r.by_backend[c.verdict->backend];
          break;
        case Verdict::Kind::kDisproved:
          s = LineStatus::kFailed;
          ++r.failed;
          break;
        case Verdict::Kind::kUnknown:
          s = LineStatus::kUnknown;
          ++r.unknown;
          break;
      }
    }
    auto [it, inserted] = r.lines.emplace(c.obligation.origin.line, s);
    if (!inserted && rank(s) > rank(it->second)) it->second = s;
  }
  if (r.failed > 0) {
    r.status = VerificationReport::Status::kFailed;
  } else if (r.unknown > 0 || pending) {
    r.status = VerificationReport::Status::kUnknown;
  }
  r.obligations = std::move(checked);
  return r;
}

}  // namespace elfe
