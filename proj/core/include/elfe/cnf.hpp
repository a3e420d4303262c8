#ifndef ELFE_CNF_HPP_
#define ELFE_CNF_HPP_

#include <span>
#include <string>
#include <vector>

#include "elfe/fol.hpp"

namespace elfe {

// Skolem symbols live in their own namespace; identifiers in documents must
// start with a letter, so these never collide with user symbols.
inline constexpr std::string_view kSkolemPrefix = "__sk";

struct Literal {
  bool positive = true;
  Formula atom;  // Predicate or Equal

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;
  int id = 0;

  bool empty() const { return literals.empty(); }
};

// Accumulates formulas into one clause set so that Skolem symbols stay unique
// across an obligation and the equality axioms cover the whole signature.
class Clausifier {
 public:
  void add(const Formula& closed_formula);
  // Appends reflexivity, symmetry, transitivity and congruence clauses when
  // equality occurs, then returns everything collected.
  std::vector<Clause> finish();

  // Clause count of the formulas added so far (without equality axioms).
  std::size_t size() const { return clauses_.size(); }

 private:
  std::vector<Clause> clauses_;
  int next_skolem_ = 1;
  int next_clause_id_ = 1;
  int next_var_ = 0;
};

// Iff expansion, negation normal form, Skolemization, distribution to CNF.
std::vector<Clause> clausify(const Formula& closed_formula);

// Universal closure of the disjunction of the literals; ⊥ for the empty clause.
Formula to_formula(const Clause& clause);
Formula to_formula(std::span<const Clause> clauses);

std::string to_string(const Clause& clause);

}  // namespace elfe

#endif  // ELFE_CNF_HPP_
