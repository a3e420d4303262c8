#ifndef ELFE_SURFACE_HPP_
#define ELFE_SURFACE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elfe/error.hpp"
#include "elfe/lexer.hpp"

namespace elfe {

// Contiguous tokens forming one atomic proposition, resolved later by the
// notation engine.
struct AtomSpan {
  std::vector<Token> tokens;
  SourceLocation where;

  std::string text() const;
};

struct RawSentence {
  enum class Kind { kAtom, kNot, kAnd, kOr, kImplies, kIff, kForall, kExists };

  Kind kind = Kind::kAtom;
  AtomSpan atom;                      // kAtom
  std::vector<RawSentence> children;  // one for kNot and quantifiers, two for binaries
  std::vector<std::string> vars;      // quantifiers
  SourceLocation where;
};

struct RawStep {
  enum class Kind { kAssume, kThen, kHence, kNote, kCase, kTake };

  Kind kind = Kind::kThen;
  SourceLocation where;
  RawSentence sentence;  // goal, case hypothesis, or Take body
  std::optional<RawSentence> since;
  std::optional<std::vector<std::string>> by;
  std::vector<std::string> vars;  // Take
  std::vector<RawStep> steps;     // Note / Case bodies
  SourceLocation closed_at;       // `qed` of a Note / Case
};

struct RawProof {
  std::vector<RawStep> steps;
  SourceLocation where;      // `Proof`
  SourceLocation closed_at;  // final `qed`
};

struct RawItem {
  enum class Kind { kInclude, kNotation, kDefinition, kAxiom, kLemma };

  Kind kind = Kind::kAxiom;
  std::string label;  // library name for kInclude
  bool auto_label = false;
  std::vector<Token> pattern;  // kNotation body
  std::optional<RawSentence> sentence;
  std::optional<RawProof> proof;
  SourceLocation where;
};

struct RawDocument {
  std::vector<RawItem> items;
};

// Keywords are case-sensitive; identifiers equal to a keyword cannot be used
// as names.
bool is_keyword(std::string_view word);

// Throws ElfeError with kSyntaxError, kUnclosedBlock or kDuplicateLabel.
RawDocument parse_document(std::span<const Token> tokens);
RawDocument parse_document(std::string_view source);

// Canonical source text; parse_document(print_document(d)) is structurally
// equal to d.
std::string print_document(const RawDocument& doc);
std::string print_sentence(const RawSentence& s);

// Structural equality ignoring source locations.
bool same_structure(const RawSentence& a, const RawSentence& b);
bool same_structure(const RawDocument& a, const RawDocument& b);

}  // namespace elfe

#endif  // ELFE_SURFACE_HPP_
