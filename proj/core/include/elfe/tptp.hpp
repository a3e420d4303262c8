#ifndef ELFE_TPTP_HPP_
#define ELFE_TPTP_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "elfe/fol.hpp"
#include "elfe/obligation.hpp"

namespace elfe {

// Identifier mapping into the TPTP lexical classes. Inside a name `_` becomes
// `__` and `'` becomes `_prime`; a functor that does not start with a
// lowercase letter gets a `q_` prefix, a variable that does not gets `Q_`;
// the prefix becomes `q_u` / `Q_u` when the escaped name would not start with
// a letter or digit. Both directions are exact inverses.
std::string tptp_functor(std::string_view name);
std::string tptp_variable(std::string_view name);
std::string from_tptp_functor(std::string_view word);
std::string from_tptp_variable(std::string_view word);

// FOF syntax for a formula; free variables are printed as variables, so pass
// closed formulas when the output must be a valid annotated formula.
std::string to_tptp(const Formula& f);

// One `fof(<label>, axiom, …).` per premise, sorted by sanitized label, then
// `fof(goal, conjecture, …).`.
std::string to_tptp(const Obligation& ob);

struct TptpStatement {
  std::string name;
  std::string role;
  Formula formula = Formula::falsum();
};

// Reads annotated `fof` formulas. Anything outside the FOF grammar raises
// ElfeError(kSyntaxError) at the offending position; names are mapped back
// through from_tptp_functor / from_tptp_variable.
std::vector<TptpStatement> parse_tptp(std::string_view text);

}  // namespace elfe

#endif  // ELFE_TPTP_HPP_
