#ifndef ELFE_FOL_HPP_
#define ELFE_FOL_HPP_

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace elfe {

// First-order term. Variables are bound by quantifiers (or implicitly
// universal at the top of a declaration); constants are the fixed points of a
// proof; applications only occur for user functions and Skolem symbols.
class Term {
 public:
  enum class Kind { kVariable, kConstant, kApplication };

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term apply(std::string function, std::vector<Term> args);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::span<const Term> args() const { return args_; }

  bool is_variable() const { return kind_ == Kind::kVariable; }
  bool is_constant() const { return kind_ == Kind::kConstant; }
  bool is_application() const { return kind_ == Kind::kApplication; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

// Immutable formula tree; copies share structure and are safe to hand to
// concurrent prover runs.
class Formula {
 public:
  enum class Kind {
    kPredicate,
    kEqual,
    kNot,
    kAnd,
    kOr,
    kImplies,
    kIff,
    kForall,
    kExists,
    kFalsum,
  };

  static Formula predicate(std::string name, std::vector<Term> args = {});
  static Formula equal(Term lhs, Term rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula equivalence(Formula l, Formula r);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula falsum();

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::kPredicate || kind() == Kind::kEqual; }
  bool is_binary() const;
  bool is_quantifier() const { return kind() == Kind::kForall || kind() == Kind::kExists; }

  // Predicate symbol; empty for other kinds.
  const std::string& name() const;
  // Predicate arguments, or {lhs, rhs} for equality.
  std::span<const Term> terms() const;
  // Operand of Not, body of a quantifier.
  const Formula& operand() const;
  const Formula& left() const;
  const Formula& right() const;
  const std::vector<std::string>& vars() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Substitution = std::map<std::string, Term>;

// Left-nested conjunction / disjunction; empty input is rejected.
Formula conjoin(std::span<const Formula> parts);
Formula disjoin(std::span<const Formula> parts);

std::set<std::string> free_vars(const Formula& f);
// Free variables in order of first occurrence (left to right).
std::vector<std::string> free_vars_ordered(const Formula& f);
std::set<std::string> term_vars(const Term& t);
bool is_closed(const Formula& f);
bool contains_quantifier(const Formula& f);

// Symbols occurring in a formula, with their arities.
struct Signature {
  std::map<std::string, std::size_t> predicates;
  std::map<std::string, std::size_t> functions;
  std::set<std::string> constants;
  bool uses_equality = false;

  void add(const Formula& f);
  void add(const Term& t);
};

Signature signature_of(const Formula& f);

// "<base><k>" for the smallest k >= 0 not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

Term substitute(const Term& t, const Substitution& mapping);
// Capture-avoiding: a bound variable that would capture a variable of an
// inserted term is renamed with fresh_name first.
Formula substitute(const Formula& f, const Substitution& mapping);

struct OpenedFormula {
  Formula body;
  std::vector<Term> constants;
};

// Strips the outermost chain of universal blocks and replaces each bound
// variable by a constant of the same name (numbered on collision with a
// constant already present or listed in `taken`).
OpenedFormula fix_constants(const Formula& f, const std::set<std::string>& taken = {});

// Unicode rendering in the style of the desugared proof texts, e.g.
// "∀a,b. equidistant(a,b,b,a)".
std::string to_string(const Term& t);
std::string to_string(const Formula& f);

}  // namespace elfe

#endif  // ELFE_FOL_HPP_
