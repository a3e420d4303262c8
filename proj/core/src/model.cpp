#include "elfe/model.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <functional>
#include <unordered_map>

#include <fmt/format.h>

#include "elfe/sat.hpp"

namespace elfe {

std::size_t Model::index(std::span<const int> args) const {
  std::size_t i = 0;
  for (int a : args) i = i * static_cast<std::size_t>(size) + static_cast<std::size_t>(a);
  return i;
}

bool Model::holds(const std::string& predicate, std::span<const int> args) const {
  auto it = predicates.find(predicate);
  if (it == predicates.end() || it->second.arity != args.size()) throw UninterpretedSymbol(predicate);
  return it->second.values[index(args)] != 0;
}

int Model::apply(const std::string& function, std::span<const int> args) const {
  auto it = functions.find(function);
  if (it == functions.end() || it->second.arity != args.size()) throw UninterpretedSymbol(function);
  return it->second.values[index(args)];
}

int evaluate(const Term& t, const Model& m, const Environment& env) {
  switch (t.kind()) {
    case Term::Kind::kVariable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw UninterpretedSymbol(t.name());
      return it->second;
    }
    case Term::Kind::kConstant: {
      auto it = m.constants.find(t.name());
      if (it == m.constants.end()) throw UninterpretedSymbol(t.name());
      return it->second;
    }
    case Term::Kind::kApplication: {
      std::vector<int> args;
      for (const auto& a : t.args()) args.push_back(evaluate(a, m, env));
      return m.apply(t.name(), args);
    }
  }
  return 0;
}

namespace {

bool quantify(const Formula& f, const Model& m, Environment& env, std::size_t i, bool universal) {
  if (i == f.vars().size()) return evaluate(f.operand(), m, env);
  const std::string& v = f.vars()[i];
  auto saved = env.find(v) != env.end() ? std::optional<int>(env[v]) : std::nullopt;
  bool result = universal;
  for (int e = 0; e < m.size; ++e) {
    env[v] = e;
    bool r = quantify(f, m, env, i + 1, universal);
    if (r != universal) {
      result = r;
      break;
    }
  }
  if (saved) {
    env[v] = *saved;
  } else {
    env.erase(v);
  }
  return result;
}

}  // namespace

bool evaluate(const Formula& f, const Model& m, const Environment& env) {
  switch (f.kind()) {
    case Formula::Kind::kFalsum:
      return false;
    case Formula::Kind::kPredicate: {
      std::vector<int> args;
      for (const auto& t : f.terms()) args.push_back(evaluate(t, m, env));
      return m.holds(f.name(), args);
    }
    case Formula::Kind::kEqual:
      return evaluate(f.terms()[0], m, env) == evaluate(f.terms()[1], m, env);
    case Formula::Kind::kNot:
      return !evaluate(f.operand(), m, env);
    case Formula::Kind::kAnd:
      return evaluate(f.left(), m, env) && evaluate(f.right(), m, env);
    case Formula::Kind::kOr:
      return evaluate(f.left(), m, env) || evaluate(f.right(), m, env);
    case Formula::Kind::kImplies:
      return !evaluate(f.left(), m, env) || evaluate(f.right(), m, env);
    case Formula::Kind::kIff:
      return evaluate(f.left(), m, env) == evaluate(f.right(), m, env);
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      Environment local = env;
      return quantify(f, m, local, 0, f.kind() == Formula::Kind::kForall);
    }
  }
  return false;
}

bool is_countermodel(const Model& m, std::span<const Formula> premises, const Formula& goal) {
  try {
    for (const auto& p : premises) {
      if (!evaluate(p, m)) return false;
    }
    return !evaluate(goal, m);
  } catch (const UninterpretedSymbol&) {
    return false;
  }
}

namespace {

void tuples(std::size_t arity, int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> t(arity, 0);
  while (true) {
    visit(t);
    std::size_t i = arity;
    while (i > 0) {
      if (++t[i - 1] < n) break;
      t[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

}  // namespace

std::string format_model(const Model& m) {
  std::string out = fmt::format("domain = {{0..{}}}\n", m.size - 1);
  for (const auto& [name, value] : m.constants) out += fmt::format("{} = {}\n", name, value);
  for (const auto& [name, table] : m.functions) {
    tuples(table.arity, m.size, [&](const std::vector<int>& args) {
      out += fmt::format("{}({}) = {}\n", name, fmt::join(args, ","), m.apply(name, args));
    });
  }
  for (const auto& [name, table] : m.predicates) {
    tuples(table.arity, m.size, [&](const std::vector<int>& args) {
      if (!m.holds(name, args)) return;
      out += table.arity == 0 ? name + "\n" : fmt::format("{}({})\n", name, fmt::join(args, ","));
    });
  }
  return out;
}

namespace {

class Deadline {
 public:
  Deadline(int budget_ms, const std::atomic<bool>* cancel)
      : end_(std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms)),
        cancel_(cancel) {}
  bool expired() const {
    return (cancel_ && cancel_->load()) || std::chrono::steady_clock::now() >= end_;
  }

 private:
  std::chrono::steady_clock::time_point end_;
  const std::atomic<bool>* cancel_;
};

struct Budget {};

// Grounds closed formulas over a fixed domain into CNF. Constants and
// function values are chosen by the solver through exactly-one selectors.
class Grounder {
 public:
  Grounder(int n, const Signature& sig, const std::vector<std::string>& constant_order,
           const Deadline& deadline)
      : n_(n), sig_(sig), deadline_(deadline) {
    top_ = solver_.new_var();
    solver_.add_clause({top_});
    for (std::size_t k = 0; k < constant_order.size(); ++k) {
      std::vector<int> sel;
      for (int e = 0; e < n_; ++e) {
        // Symmetry breaking: the k-th constant takes one of the first k+1 elements.
        sel.push_back(e <= static_cast<int>(k) ? solver_.new_var() : -top_);
      }
      exactly_one(sel);
      constants_.emplace(constant_order[k], std::move(sel));
    }
    for (const auto& [f, arity] : sig_.functions) {
      auto& table = functions_[f];
      tuples(arity, n_, [&](const std::vector<int>&) {
        std::vector<int> sel;
        for (int e = 0; e < n_; ++e) sel.push_back(solver_.new_var());
        exactly_one(sel);
        table.push_back(std::move(sel));
      });
    }
  }

  void assert_formula(const Formula& f, bool positive) {
    Environment env;
    assert_rec(f, env, positive);
  }

  SatSolver::Result solve() {
    return solver_.solve([this] { return deadline_.expired(); });
  }

  Model extract() const {
    Model m;
    m.size = n_;
    for (const auto& [c, sel] : constants_) m.constants[c] = chosen(sel);
    for (const auto& [f, arity] : sig_.functions) {
      Model::Table table{arity, {}};
      for (const auto& sel : functions_.at(f)) table.values.push_back(chosen(sel));
      m.functions[f] = std::move(table);
    }
    for (const auto& [p, arity] : sig_.predicates) {
      Model::Table table{arity, {}};
      std::size_t rows = 1;
      for (std::size_t i = 0; i < arity; ++i) rows *= static_cast<std::size_t>(n_);
      table.values.assign(rows, 0);
      m.predicates[p] = std::move(table);
    }
    for (const auto& [key, var] : atoms_) {
      auto& table = m.predicates[key.first];
      table.values[key.second] = solver_.value(var) ? 1 : 0;
    }
    return m;
  }

 private:
  int chosen(const std::vector<int>& sel) const {
    for (int e = 0; e < n_; ++e) {
      int l = sel[static_cast<std::size_t>(e)];
      if (l == top_ || (l != -top_ && l > 0 && solver_.value(l))) return e;
    }
    return 0;
  }

  void exactly_one(const std::vector<int>& sel) {
    std::vector<int> live;
    for (int l : sel) {
      if (l != -top_) live.push_back(l);
    }
    solver_.add_clause(live);
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) solver_.add_clause({-live[i], -live[j]});
    }
  }

  void tick() {
    if ((++ticks_ & 4095) == 0 && deadline_.expired()) throw Budget{};
  }

  bool is_true(int l) const { return l == top_; }
  bool is_false(int l) const { return l == -top_; }

  int gate_and(std::vector<int> in) {
    std::vector<int> lits;
    for (int l : in) {
      if (is_false(l)) return -top_;
      if (!is_true(l)) lits.push_back(l);
    }
    if (lits.empty()) return top_;
    if (lits.size() == 1) return lits[0];
    int g = solver_.new_var();
    std::vector<int> back{g};
    for (int l : lits) {
      solver_.add_clause({-g, l});
      back.push_back(-l);
    }
    solver_.add_clause(std::move(back));
    return g;
  }

  int gate_or(std::vector<int> in) {
    for (int& l : in) l = -l;
    return -gate_and(std::move(in));
  }

  int gate_iff(int a, int b) {
    if (is_true(a)) return b;
    if (is_false(a)) return -b;
    if (is_true(b)) return a;
    if (is_false(b)) return -a;
    int g = solver_.new_var();
    solver_.add_clause({-g, -a, b});
    solver_.add_clause({-g, a, -b});
    solver_.add_clause({g, a, b});
    solver_.add_clause({g, -a, -b});
    return g;
  }

  int atom(const std::string& p, const std::vector<int>& args) {
    std::size_t idx = 0;
    for (int a : args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a);
    auto key = std::make_pair(p, idx);
    auto it = atoms_.find(key);
    if (it != atoms_.end()) return it->second;
    int v = solver_.new_var();
    atoms_.emplace(key, v);
    return v;
  }

  // val[e] is a literal for "t denotes e".
  std::vector<int> term_value(const Term& t, const Environment& env) {
    std::vector<int> val(static_cast<std::size_t>(n_), -top_);
    switch (t.kind()) {
      case Term::Kind::kVariable:
        val[static_cast<std::size_t>(env.at(t.name()))] = top_;
        return val;
      case Term::Kind::kConstant:
        return constants_.at(t.name());
      case Term::Kind::kApplication: {
        std::vector<std::vector<int>> args;
        for (const auto& a : t.args()) args.push_back(term_value(a, env));
        const auto& table = functions_.at(t.name());
        std::vector<std::vector<int>> options(static_cast<std::size_t>(n_));
        std::size_t row = 0;
        tuples(args.size(), n_, [&](const std::vector<int>& tuple) {
          std::vector<int> cond;
          for (std::size_t i = 0; i < tuple.size(); ++i) cond.push_back(args[i][static_cast<std::size_t>(tuple[i])]);
          int c = gate_and(cond);
          if (!is_false(c)) {
            for (int e = 0; e < n_; ++e) {
              options[static_cast<std::size_t>(e)].push_back(gate_and({c, table[row][static_cast<std::size_t>(e)]}));
            }
          }
          ++row;
        });
        for (int e = 0; e < n_; ++e) val[static_cast<std::size_t>(e)] = gate_or(options[static_cast<std::size_t>(e)]);
        return val;
      }
    }
    return val;
  }

  static std::optional<int> definite(const std::vector<int>& val, int top) {
    for (std::size_t e = 0; e < val.size(); ++e) {
      if (val[e] == top) return static_cast<int>(e);
    }
    return std::nullopt;
  }

  int encode(const Formula& f, Environment& env) {
    tick();
    switch (f.kind()) {
      case Formula::Kind::kFalsum:
        return -top_;
      case Formula::Kind::kPredicate: {
        std::vector<std::vector<int>> vals;
        std::vector<int> fixed;
        bool all_definite = true;
        for (const auto& t : f.terms()) {
          vals.push_back(term_value(t, env));
          auto d = definite(vals.back(), top_);
          if (d) {
            fixed.push_back(*d);
          } else {
            all_definite = false;
          }
        }
        if (all_definite) return atom(f.name(), fixed);
        std::vector<int> options;
        tuples(vals.size(), n_, [&](const std::vector<int>& tuple) {
          std::vector<int> cond;
          for (std::size_t i = 0; i < tuple.size(); ++i) cond.push_back(vals[i][static_cast<std::size_t>(tuple[i])]);
          if (std::any_of(cond.begin(), cond.end(), [&](int l) { return is_false(l); })) return;
          cond.push_back(atom(f.name(), tuple));
          options.push_back(gate_and(cond));
        });
        return gate_or(options);
      }
      case Formula::Kind::kEqual: {
        auto l = term_value(f.terms()[0], env);
        auto r = term_value(f.terms()[1], env);
        std::vector<int> options;
        for (std::size_t e = 0; e < l.size(); ++e) options.push_back(gate_and({l[e], r[e]}));
        return gate_or(options);
      }
      case Formula::Kind::kNot:
        return -encode(f.operand(), env);
      case Formula::Kind::kAnd:
        return gate_and({encode(f.left(), env), encode(f.right(), env)});
      case Formula::Kind::kOr:
        return gate_or({encode(f.left(), env), encode(f.right(), env)});
      case Formula::Kind::kImplies:
        return gate_or({-encode(f.left(), env), encode(f.right(), env)});
      case Formula::Kind::kIff:
        return gate_iff(encode(f.left(), env), encode(f.right(), env));
      case Formula::Kind::kForall:
      case Formula::Kind::kExists: {
        std::vector<int> parts;
        expand(f, env, [&] { parts.push_back(encode(f.operand(), env)); });
        return f.kind() == Formula::Kind::kForall ? gate_and(parts) : gate_or(parts);
      }
    }
    return -top_;
  }

  void expand(const Formula& q, Environment& env, const std::function<void()>& body) {
    const auto& vars = q.vars();
    Environment saved = env;
    tuples(vars.size(), n_, [&](const std::vector<int>& tuple) {
      for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = tuple[i];
      body();
    });
    env = saved;
  }

  // Adds clauses forcing f (or ¬f) without introducing a gate where the
  // connective allows it.
  void assert_rec(const Formula& f, Environment& env, bool positive) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kNot:
        assert_rec(f.operand(), env, !positive);
        return;
      case K::kAnd:
        if (positive) {
          assert_rec(f.left(), env, true);
          assert_rec(f.right(), env, true);
          return;
        }
        break;
      case K::kOr:
        if (!positive) {
          assert_rec(f.left(), env, false);
          assert_rec(f.right(), env, false);
          return;
        }
        break;
      case K::kImplies:
        if (!positive) {
          assert_rec(f.left(), env, true);
          assert_rec(f.right(), env, false);
          return;
        }
        break;
      case K::kForall:
        if (positive) {
          expand(f, env, [&] { assert_rec(f.operand(), env, true); });
          return;
        }
        break;
      case K::kExists:
        if (!positive) {
          expand(f, env, [&] { assert_rec(f.operand(), env, false); });
          return;
        }
        break;
      default:
        break;
    }
    int l = encode(f, env);
    solver_.add_clause({positive ? l : -l});
  }

  int n_;
  const Signature& sig_;
  const Deadline& deadline_;
  SatSolver solver_;
  int top_ = 0;
  std::map<std::string, std::vector<int>> constants_;
  std::map<std::string, std::vector<std::vector<int>>> functions_;
  std::map<std::pair<std::string, std::size_t>, int> atoms_;
  std::uint64_t ticks_ = 0;
};

void constants_in_order(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is_constant() && seen.insert(t.name()).second) out.push_back(t.name());
  for (const auto& a : t.args()) constants_in_order(a, out, seen);
}

void constants_in_order(const Formula& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f.kind()) {
    case Formula::Kind::kPredicate:
    case Formula::Kind::kEqual:
      for (const auto& t : f.terms()) constants_in_order(t, out, seen);
      return;
    case Formula::Kind::kFalsum:
      return;
    case Formula::Kind::kNot:
    case Formula::Kind::kForall:
    case Formula::Kind::kExists:
      constants_in_order(f.operand(), out, seen);
      return;
    default:
      constants_in_order(f.left(), out, seen);
      constants_in_order(f.right(), out, seen);
  }
}

std::optional<Model> search(std::span<const Formula> positive, const Formula* negative,
                            const ModelSearchLimits& limits) {
  Signature sig;
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& f : positive) {
    sig.add(f);
    constants_in_order(f, order, seen);
  }
  if (negative) {
    sig.add(*negative);
    constants_in_order(*negative, order, seen);
  }
  Deadline deadline(limits.budget_ms, limits.cancel);
  for (int n = 1; n <= limits.max_size; ++n) {
    if (deadline.expired()) return std::nullopt;
    try {
      Grounder g(n, sig, order, deadline);
      for (const auto& f : positive) g.assert_formula(f, true);
      if (negative) g.assert_formula(*negative, false);
      if (g.solve() != SatSolver::Result::kSat) continue;
      Model m = g.extract();
      bool ok = true;
      for (const auto& f : positive) ok = ok && evaluate(f, m);
      if (negative) ok = ok && !evaluate(*negative, m);
      if (ok) return m;
    } catch (const Budget&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Model> find_model(std::span<const Formula> formulas, const ModelSearchLimits& limits) {
  return search(formulas, nullptr, limits);
}

std::optional<Model> find_countermodel(std::span<const Formula> premises, const Formula& goal,
                                       const ModelSearchLimits& limits) {
  return search(premises, &goal, limits);
}

}  // namespace elfe
