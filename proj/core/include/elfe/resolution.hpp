#ifndef ELFE_RESOLUTION_HPP_
#define ELFE_RESOLUTION_HPP_

#include <atomic>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elfe/cnf.hpp"
#include "elfe/fol.hpp"

namespace elfe {

struct ProverLimits {
  std::size_t max_clauses = 100000;
  double max_seconds = 5.0;
  std::size_t max_weight = 60;
  const std::atomic<bool>* cancel = nullptr;
};

struct ProofResult {
  enum class Kind { kRefuted, kSaturated, kResourceOut };
  enum class Limit { kNone, kClauses, kTime, kWeight, kCancelled };

  Kind kind = Kind::kSaturated;
  Limit limit = Limit::kNone;
  std::size_t proof_length = 0;  // clauses in the refutation
  std::size_t generated = 0;
  std::size_t given = 0;
};

std::string_view to_string(ProofResult::Kind kind);
std::string_view to_string(ProofResult::Limit limit);

// Clausifies premises ∪ {¬goal} and runs the given-clause loop with every
// clause in the set of support.
ProofResult prove(std::span<const Formula> premises, const Formula& goal,
                  const ProverLimits& limits = {});

// Set-of-support variant: clauses of `usable` (and the equality axioms) are
// never resolved with each other. Complete when `usable` is satisfiable.
ProofResult prove(std::span<const Formula> usable, std::span<const Formula> support,
                  const Formula& goal, const ProverLimits& limits = {});

// Symbol-triggered premise selection. Symbols of `seeds` start the search;
// a premise is picked up through its rarest symbols (occurrence count across
// `premises`, within `tolerance` times the minimum) and contributes its own
// symbols to the next round. Returns indices into `premises`, ascending.
std::vector<std::size_t> select_relevant(std::span<const Formula> premises,
                                         std::span<const Formula> seeds, int depth,
                                         double tolerance = 1.0);

// Runs prove(usable, support, goal) on growing premise selections: goal
// symbols at depth 1, goal and support symbols at depths 1 and 2, then all
// of `usable`. Only the final run can report saturation.
ProofResult prove_sliced(std::span<const Formula> usable, std::span<const Formula> support,
                         const Formula& goal, const ProverLimits& limits = {});

// Most general unifier with occurs check; the terms share one variable space.
std::optional<Substitution> unify(const Term& a, const Term& b);

// All binary resolvents. The second clause is renamed apart first when
// `rename_apart` is set.
std::vector<Clause> resolve(const Clause& c1, const Clause& c2, bool rename_apart = true);

// C subsumes D when some substitution maps every literal of C into D.
bool subsumes(const Clause& c, const Clause& d);

}  // namespace elfe

#endif  // ELFE_RESOLUTION_HPP_
