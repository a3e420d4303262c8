#ifndef ELFE_MODEL_HPP_
#define ELFE_MODEL_HPP_

#include <atomic>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "elfe/fol.hpp"

namespace elfe {

// Finite interpretation over {0..size-1}; equality is identity.
struct Model {
  struct Table {
    std::size_t arity = 0;
    std::vector<int> values;  // row-major over size^arity argument tuples
  };

  int size = 1;
  std::map<std::string, int> constants;
  std::map<std::string, Table> predicates;  // values are 0 / 1
  std::map<std::string, Table> functions;

  bool holds(const std::string& predicate, std::span<const int> args) const;
  int apply(const std::string& function, std::span<const int> args) const;
  std::size_t index(std::span<const int> args) const;
};

class UninterpretedSymbol : public std::runtime_error {
 public:
  explicit UninterpretedSymbol(const std::string& symbol)
      : std::runtime_error("uninterpreted symbol '" + symbol + "'") {}
};

using Environment = std::map<std::string, int>;

// Tarskian satisfaction; quantifiers range over the whole domain.
bool evaluate(const Formula& f, const Model& m, const Environment& env = {});
int evaluate(const Term& t, const Model& m, const Environment& env = {});

// `domain = {0..n-1}`, constants, then one line per true atom, sorted.
std::string format_model(const Model& m);

struct ModelSearchLimits {
  int max_size = 3;
  int budget_ms = 3000;
  const std::atomic<bool>* cancel = nullptr;
};

// A model of every formula, smallest domain first. Formulas must be closed.
// Any model returned has been re-checked with evaluate.
std::optional<Model> find_model(std::span<const Formula> formulas,
                                const ModelSearchLimits& limits = {});

// A model of the premises in which the goal is false.
std::optional<Model> find_countermodel(std::span<const Formula> premises, const Formula& goal,
                                       const ModelSearchLimits& limits = {});

// Premises ∧ ¬goal holds in m.
bool is_countermodel(const Model& m, std::span<const Formula> premises, const Formula& goal);

}  // namespace elfe

#endif  // ELFE_MODEL_HPP_
