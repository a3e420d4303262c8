#ifndef ELFE_OBLIGATION_HPP_
#define ELFE_OBLIGATION_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elfe/model.hpp"
#include "elfe/sequence.hpp"

namespace elfe {

struct Obligation {
  std::string id;  // <lemma>/<line>/<k>
  std::string lemma;
  std::string statement;  // statement id within the lemma's sequence
  StatementRole role = StatementRole::kDerivation;
  std::vector<ContextPremise> premises;
  Formula goal = Formula::falsum();
  SourceLocation origin;
  bool restricted = false;
  std::vector<std::string> restriction;

  std::vector<Formula> premise_formulas() const;
};

// One obligation per ByContext statement, in source order. Premises are the
// visible context, cut down to the named ambient premises plus every local
// goal when the statement carries a `by` restriction.
std::vector<Obligation> derive_obligations(const StatementSequence& seq);

struct Verdict {
  enum class Kind { kProved, kDisproved, kUnknown };
  enum class Reason { kNone, kTimeout, kSaturated, kError };

  Kind kind = Kind::kUnknown;
  std::string backend;
  long long ms = 0;
  std::optional<Model> countermodel;  // kDisproved
  Reason reason = Reason::kError;     // kUnknown
  std::string details;

  static Verdict proved(std::string backend, long long ms);
  static Verdict disproved(std::string backend, Model model, long long ms);
  static Verdict unknown(Reason reason, std::string details, long long ms = 0);
};

std::string_view to_string(Verdict::Kind kind);
std::string_view to_string(Verdict::Reason reason);

enum class LineStatus { kVerified, kFailed, kUnknown, kPending };

std::string_view to_string(LineStatus status);

struct CheckedObligation {
  Obligation obligation;
  std::optional<Verdict> verdict;  // empty while pending
};

struct VerificationReport {
  enum class Status { kVerified, kFailed, kUnknown };

  Status status = Status::kVerified;
  std::vector<CheckedObligation> obligations;
  std::map<int, LineStatus> lines;
  std::size_t proved = 0;
  std::size_t failed = 0;
  std::size_t unknown = 0;
  std::map<std::string, std::size_t> by_backend;
  long long wall_ms = 0;
};

std::string_view to_string(VerificationReport::Status status);

// `statement_lines` lists every line that carries a statement so that lines
// without obligations show as verified.
VerificationReport assemble_report(std::vector<CheckedObligation> checked,
                                   const std::vector<int>& statement_lines = {},
                                   long long wall_ms = 0);

}  // namespace elfe

#endif  // ELFE_OBLIGATION_HPP_
