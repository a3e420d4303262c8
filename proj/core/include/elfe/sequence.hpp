#ifndef ELFE_SEQUENCE_HPP_
#define ELFE_SEQUENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "elfe/desugar.hpp"

namespace elfe {

enum class ProofKind { kAssumed, kByContext, kSubsequence };

std::string_view to_string(ProofKind kind);

// What a statement stands for in the source; used for reporting only.
enum class StatementRole {
  kLemma,         // S
  kFixed,         // S1, constants fixed
  kAssumption,    // Assume step
  kRest,          // goal left after an Assume
  kDerivation,    // Then / Hence
  kSince,         // the clause after `since`
  kNote,
  kCases,
  kCase,
  kHypothesis,    // case hypothesis
  kCompleteness,  // disjunction of the case hypotheses
  kWitness,       // existence claim of a Take
  kInstance,      // Take body over the new constants
  kDischarge,     // block goal no Hence proved verbatim
};

std::string_view to_string(StatementRole role);

struct Statement {
  std::string id;
  Formula goal = Formula::falsum();
  ProofKind kind = ProofKind::kByContext;
  StatementRole role = StatementRole::kDerivation;
  std::optional<std::vector<std::string>> restriction;  // `by` labels
  std::vector<Statement> children;                      // kSubsequence
  std::vector<std::string> context;                     // ids of usable local goals
  SourceLocation origin;
};

struct StatementSequence {
  std::string lemma;
  Statement root;
  std::vector<Premise> ambient;

  const Statement* find(const std::string& id) const;
  // Depth-first, children in order.
  std::vector<const Statement*> all() const;
};

struct BuildOptions {
  bool case_completeness = true;
};

// Throws ElfeError(kStructureError) for Assume steps that do not match the
// pending goal.
StatementSequence build_sequence(const Decl& lemma, std::vector<Premise> ambient,
                                 const BuildOptions& options = {});

struct ContextPremise {
  std::string label;  // ambient label or statement id
  Formula formula = Formula::falsum();
  bool local = false;
};

// Ambient premises followed by the goals of the statement's context.
std::vector<ContextPremise> visible_context(const StatementSequence& seq, const Statement& stmt);

// Indented `id [kind] goal` tree.
std::string dump(const StatementSequence& seq);

}  // namespace elfe

#endif  // ELFE_SEQUENCE_HPP_
