#ifndef ELFE_DESUGAR_HPP_
#define ELFE_DESUGAR_HPP_

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elfe/error.hpp"
#include "elfe/fol.hpp"
#include "elfe/notation.hpp"
#include "elfe/surface.hpp"

namespace elfe {

enum class DeclKind { kAxiom, kDefinition, kLemma };

std::string_view to_string(DeclKind kind);

// A closed formula usable as a premise by every proof that can see it.
struct Premise {
  std::string label;
  DeclKind kind = DeclKind::kAxiom;
  Formula formula = Formula::falsum();
};

struct Step;

struct ProofTree {
  std::vector<Step> steps;
  SourceLocation where;
  SourceLocation closed_at;
};

struct CaseBranch {
  Formula hypothesis = Formula::falsum();
  ProofTree body;
  SourceLocation where;
};

// Proof step over first-order formulas. Names fixed by the lemma or by Take
// appear as constants; quantified names stay variables.
struct Step {
  enum class Kind { kAssume, kDerive, kNote, kCases, kTake };

  Kind kind = Kind::kDerive;
  SourceLocation where;
  Formula goal = Formula::falsum();  // assumption, derived goal, note goal, Take body
  std::optional<Formula> since;
  std::optional<std::vector<std::string>> by;
  bool hence = false;
  std::vector<std::string> vars;  // Take; free in `goal` as variables
  ProofTree sub;                  // Note
  std::vector<CaseBranch> cases;  // Cases
};

struct Decl {
  std::string label;
  DeclKind kind = DeclKind::kAxiom;
  Formula formula = Formula::falsum();
  std::optional<ProofTree> proof;
  SourceLocation where;
  bool auto_label = false;
};

// Everything an Include contributes to the including document.
struct LibraryScope {
  NotationScope notations;
  std::vector<Premise> premises;
};

struct Document {
  std::vector<std::string> includes;
  std::vector<Decl> decls;
  NotationScope notations;  // included plus own, in registration order
  std::vector<Premise> library_premises;

  // Library premises plus every declaration before decl `index`.
  std::vector<Premise> ambient_for(std::size_t index) const;
};

using IncludeResolver = std::function<LibraryScope(const std::string& name, SourceLocation)>;

// Wraps the free variables of f that are not in `fixed` in one universal
// block, in order of first occurrence. Idempotent.
Formula implicit_quantify(const Formula& f, const std::set<std::string>& fixed = {});

// Resolves notations, labels and names; errors from all declarations are
// collected into one ElfeError.
Document desugar(const RawDocument& raw, const IncludeResolver& resolve_include);
// Same, with includes already resolved into `libraries`.
Document desugar(const RawDocument& raw, const LibraryScope& libraries);

}  // namespace elfe

#endif  // ELFE_DESUGAR_HPP_
