#ifndef ELFE_NOTATION_HPP_
#define ELFE_NOTATION_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elfe/fol.hpp"
#include "elfe/lexer.hpp"
#include "elfe/surface.hpp"

namespace elfe {

// A compiled mixfix pattern such as `a-b ≡ c-d` for equidistant/4. Slot
// letters are discarded; arguments are taken in order of appearance.
struct NotationPattern {
  struct Element {
    bool slot = false;
    std::string literal;  // token text when !slot

    friend bool operator==(const Element&, const Element&) = default;
  };

  std::string name;
  std::vector<Element> elements;
  std::size_t arity = 0;
  SourceLocation where;

  bool same_as(const NotationPattern& other) const {
    return name == other.name && elements == other.elements;
  }
};

// Throws kDuplicateSlot when a slot letter repeats, kInvalidNotation when the
// pattern has no literal or no slot.
NotationPattern parse_notation(const std::string& name, std::span<const Token> pattern,
                               SourceLocation where = {});

// Immutable set of visible notations; registration yields a new scope.
class NotationScope {
 public:
  NotationScope();

  // Re-registering an identical pattern is a no-op; binding a name to a
  // different arity throws kConflictingNotation.
  NotationScope with(const NotationPattern& pattern) const;

  std::span<const NotationPattern> patterns() const { return *patterns_; }
  std::optional<std::size_t> arity_of(const std::string& name) const;

 private:
  std::shared_ptr<const std::vector<NotationPattern>> patterns_;
};

// Turns an atom span into a predicate application, equality, inequality or
// ⊥. Names come back as variables; binding them is the caller's job.
// Throws kUnmatchedAtom / kAmbiguousMatch.
Formula match_atom(const AtomSpan& span, const NotationScope& scope);

// Surface tokens for pattern applied to args (each rendered as a term).
std::vector<Token> render(const NotationPattern& pattern, std::span<const Term> args);

}  // namespace elfe

#endif  // ELFE_NOTATION_HPP_
