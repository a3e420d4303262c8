#include "elfe/resolution.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace elfe {

std::string_view to_string(ProofResult::Kind kind) {
  switch (kind) {
    case ProofResult::Kind::kRefuted:
      return "refuted";
    case ProofResult::Kind::kSaturated:
      return "saturated";
    case ProofResult::Kind::kResourceOut:
      return "resource-out";
  }
  return "?";
}

std::string_view to_string(ProofResult::Limit limit) {
  switch (limit) {
    case ProofResult::Limit::kNone:
      return "none";
    case ProofResult::Limit::kClauses:
      return "clauses";
    case ProofResult::Limit::kTime:
      return "time";
    case ProofResult::Limit::kWeight:
      return "weight";
    case ProofResult::Limit::kCancelled:
      return "cancelled";
  }
  return "?";
}

namespace {

// Hash-consed terms. Atoms are terms headed by a predicate symbol.
class TermBank {
 public:
  struct Node {
    int sym;  // symbol id, or variable index
    bool var;
    bool ground;
    std::size_t weight;
    std::vector<int> args;
  };

  int variable(int index) {
    while (static_cast<int>(vars_.size()) <= index) vars_.push_back(-1);
    if (vars_[static_cast<std::size_t>(index)] < 0) {
      vars_[static_cast<std::size_t>(index)] = static_cast<int>(nodes_.size());
      nodes_.push_back({index, true, false, 1, {}});
    }
    return vars_[static_cast<std::size_t>(index)];
  }

  int make(int sym, std::vector<int> args) {
    Key key{sym, args};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    bool ground = true;
    std::size_t weight = 1;
    for (int a : args) {
      ground = ground && node(a).ground;
      weight += node(a).weight;
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({sym, false, ground, weight, std::move(args)});
    index_.emplace(std::move(key), id);
    return id;
  }

  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  int symbol(const std::string& name) {
    auto [it, inserted] = symbols_.emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }
  const std::string& name(int sym) const { return names_[static_cast<std::size_t>(sym)]; }

 private:
  struct Key {
    int sym;
    std::vector<int> args;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<int>()(k.sym);
      for (int a : k.args) h = h * 1000003u ^ std::hash<int>()(a);
      return h;
    }
  };

  std::vector<Node> nodes_;
  std::vector<int> vars_;
  std::unordered_map<Key, int, KeyHash> index_;
  std::unordered_map<std::string, int> symbols_;
  std::vector<std::string> names_;
};

struct Lit {
  bool positive;
  int atom;
  bool operator==(const Lit&) const = default;
  bool operator<(const Lit& o) const {
    return atom != o.atom ? atom < o.atom : positive < o.positive;
  }
};

struct PClause {
  std::vector<Lit> lits;
  std::size_t weight = 0;
  int vars = 0;
  std::vector<int> parents;
};

class Bindings {
 public:
  explicit Bindings(const TermBank& bank) : bank_(bank) {}

  int deref(int t) const {
    while (true) {
      const auto& n = bank_.node(t);
      if (!n.var) return t;
      auto i = static_cast<std::size_t>(n.sym);
      if (i >= bind_.size() || bind_[i] < 0) return t;
      t = bind_[i];
    }
  }

  std::size_t mark() const { return trail_.size(); }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      bind_[static_cast<std::size_t>(trail_.back())] = -1;
      trail_.pop_back();
    }
  }

  bool unify(int a, int b) {
    a = deref(a);
    b = deref(b);
    if (a == b) return true;
    const auto& na = bank_.node(a);
    const auto& nb = bank_.node(b);
    if (na.var) return bind_checked(na.sym, b);
    if (nb.var) return bind_checked(nb.sym, a);
    if (na.sym != nb.sym || na.args.size() != nb.args.size()) return false;
    for (std::size_t i = 0; i < na.args.size(); ++i) {
      if (!unify(na.args[i], nb.args[i])) return false;
    }
    return true;
  }

  // One-way matching; variables of `target` stay rigid.
  bool match(int pattern, int target) {
    const auto& np = bank_.node(pattern);
    if (np.var) {
      auto i = static_cast<std::size_t>(np.sym);
      if (i < bind_.size() && bind_[i] >= 0) return bind_[i] == target;
      bind(np.sym, target);
      return true;
    }
    if (np.ground) return pattern == target;
    const auto& nt = bank_.node(target);
    if (nt.var || np.sym != nt.sym || np.args.size() != nt.args.size()) return false;
    for (std::size_t i = 0; i < np.args.size(); ++i) {
      if (!match(np.args[i], nt.args[i])) return false;
    }
    return true;
  }

 private:
  void bind(int var, int t) {
    auto i = static_cast<std::size_t>(var);
    if (i >= bind_.size()) bind_.resize(i + 1, -1);
    bind_[i] = t;
    trail_.push_back(var);
  }

  bool bind_checked(int var, int t) {
    if (occurs(var, t)) return false;
    bind(var, t);
    return true;
  }

  bool occurs(int var, int t) const {
    t = deref(t);
    const auto& n = bank_.node(t);
    if (n.var) return n.sym == var;
    if (n.ground) return false;
    for (int a : n.args) {
      if (occurs(var, a)) return true;
    }
    return false;
  }

  const TermBank& bank_;
  std::vector<int> bind_;
  std::vector<int> trail_;
};

class Engine {
 public:
  Engine() : bindings_(bank_), eq_(bank_.symbol("=/2")) {}

  using VarMap = std::map<std::string, int>;

  int term_of(const Term& t, VarMap& vars) {
    switch (t.kind()) {
      case Term::Kind::kVariable: {
        auto [it, inserted] = vars.emplace(t.name(), static_cast<int>(vars.size()));
        return bank_.variable(it->second);
      }
      case Term::Kind::kConstant:
        return bank_.make(bank_.symbol("c:" + t.name()), {});
      case Term::Kind::kApplication: {
        std::vector<int> args;
        for (const auto& a : t.args()) args.push_back(term_of(a, vars));
        return bank_.make(bank_.symbol(functor("f:", t.name(), args.size())), std::move(args));
      }
    }
    return -1;
  }

  int atom_of(const Formula& atom, VarMap& vars) {
    std::vector<int> args;
    for (const auto& t : atom.terms()) args.push_back(term_of(t, vars));
    if (atom.kind() == Formula::Kind::kEqual) return bank_.make(eq_, std::move(args));
    return bank_.make(bank_.symbol(functor("p:", atom.name(), args.size())), std::move(args));
  }

  PClause raw_clause(const Clause& c, VarMap& vars) {
    PClause out;
    for (const auto& l : c.literals) out.lits.push_back({l.positive, atom_of(l.atom, vars)});
    out.vars = static_cast<int>(vars.size());
    return out;
  }

  Term term_back(int t, const std::vector<std::string>* names = nullptr) const {
    const auto& n = bank_.node(t);
    if (n.var) {
      auto i = static_cast<std::size_t>(n.sym);
      if (names && i < names->size()) return Term::variable((*names)[i]);
      return Term::variable("X" + std::to_string(n.sym));
    }
    const std::string& name = bank_.name(n.sym);
    if (name.starts_with("c:")) return Term::constant(name.substr(2));
    std::vector<Term> args;
    for (int a : n.args) args.push_back(term_back(a, names));
    return Term::apply(base_name(name), std::move(args));
  }

  Clause clause_back(const PClause& c) const {
    Clause out;
    for (const auto& l : c.lits) {
      const auto& n = bank_.node(l.atom);
      std::vector<Term> args;
      for (int a : n.args) args.push_back(term_back(a));
      Formula atom = n.sym == eq_ ? Formula::equal(args[0], args[1])
                                  : Formula::predicate(base_name(bank_.name(n.sym)), std::move(args));
      out.literals.push_back({l.positive, std::move(atom)});
    }
    return out;
  }

  // Sorted, duplicate-free literals with variables renumbered by first
  // occurrence. With `simplify`, tautologies vanish and t≠t literals drop.
  std::optional<PClause> normalize(PClause c, bool simplify = true) {
    if (simplify) {
      std::vector<Lit> kept;
      for (const auto& l : c.lits) {
        const auto& n = bank_.node(l.atom);
        if (n.sym == eq_ && n.args[0] == n.args[1]) {
          if (l.positive) return std::nullopt;
          continue;
        }
        kept.push_back(l);
      }
      c.lits = std::move(kept);
    }
    // Order by a variable-blind key first so the renaming is stable.
    std::stable_sort(c.lits.begin(), c.lits.end(),
                     [&](const Lit& a, const Lit& b) { return shape(a) < shape(b); });
    std::map<int, int> rename;
    for (auto& l : c.lits) l.atom = rename_vars(l.atom, rename);
    std::sort(c.lits.begin(), c.lits.end());
    c.lits.erase(std::unique(c.lits.begin(), c.lits.end()), c.lits.end());
    if (simplify) {
      for (std::size_t i = 0; i + 1 < c.lits.size(); ++i) {
        if (c.lits[i].atom == c.lits[i + 1].atom) return std::nullopt;
      }
    }
    c.weight = 0;
    for (const auto& l : c.lits) c.weight += bank_.node(l.atom).weight;
    c.vars = static_cast<int>(rename.size());
    return c;
  }

  int head(int atom) const { return bank_.node(atom).sym; }

  // Resolvents of `a` on literal i against every complementary literal of
  // `b`, whose variables are shifted by `offset`.
  void resolve_literal(const PClause& a, std::size_t i, const PClause& b, int offset,
                       std::vector<PClause>& out) {
    const Lit li = a.lits[i];
    for (std::size_t j = 0; j < b.lits.size(); ++j) {
      if (b.lits[j].positive == li.positive || head(b.lits[j].atom) != head(li.atom)) continue;
      auto m = bindings_.mark();
      if (bindings_.unify(li.atom, shift(b.lits[j].atom, offset))) {
        PClause r;
        for (std::size_t k = 0; k < a.lits.size(); ++k) {
          if (k != i) r.lits.push_back({a.lits[k].positive, apply(a.lits[k].atom)});
        }
        for (std::size_t k = 0; k < b.lits.size(); ++k) {
          if (k != j) r.lits.push_back({b.lits[k].positive, apply(shift(b.lits[k].atom, offset))});
        }
        out.push_back(std::move(r));
      }
      bindings_.undo(m);
    }
  }

  void factors(const PClause& a, std::vector<PClause>& out) {
    for (std::size_t i = 0; i < a.lits.size(); ++i) {
      for (std::size_t j = i + 1; j < a.lits.size(); ++j) {
        if (a.lits[i].positive != a.lits[j].positive) continue;
        if (head(a.lits[i].atom) != head(a.lits[j].atom)) continue;
        auto m = bindings_.mark();
        if (bindings_.unify(a.lits[i].atom, a.lits[j].atom)) {
          PClause r;
          for (std::size_t k = 0; k < a.lits.size(); ++k) {
            if (k != j) r.lits.push_back({a.lits[k].positive, apply(a.lits[k].atom)});
          }
          out.push_back(std::move(r));
        }
        bindings_.undo(m);
      }
    }
  }

  bool subsumes(const PClause& c, const PClause& d) {
    if (c.lits.size() > d.lits.size()) return false;
    for (const auto& l : c.lits) {
      bool found = std::any_of(d.lits.begin(), d.lits.end(), [&](const Lit& k) {
        return k.positive == l.positive && head(k.atom) == head(l.atom);
      });
      if (!found) return false;
    }
    std::vector<Lit> shifted;
    for (const auto& l : c.lits) shifted.push_back({l.positive, shift(l.atom, d.vars)});
    return subsume_from(shifted, 0, d);
  }

  bool unify(int a, int b) { return bindings_.unify(a, b); }

  int apply(int t) {
    t = bindings_.deref(t);
    const auto& n = bank_.node(t);
    if (n.var || n.ground) return t;
    const int sym = n.sym;
    const std::vector<int> old = n.args;
    std::vector<int> args;
    args.reserve(old.size());
    for (int a : old) args.push_back(apply(a));
    return bank_.make(sym, std::move(args));
  }

 private:
  static std::string functor(std::string_view tag, const std::string& name, std::size_t arity) {
    return std::string(tag) + name + "/" + std::to_string(arity);
  }
  static std::string base_name(const std::string& symbol) {
    return symbol.substr(2, symbol.rfind('/') - 2);
  }

  // Sort key that ignores variable identity.
  std::vector<int> shape(const Lit& l) const {
    std::vector<int> out{l.positive ? 1 : 0};
    flatten(l.atom, out);
    return out;
  }
  void flatten(int t, std::vector<int>& out) const {
    const auto& n = bank_.node(t);
    if (n.var) {
      out.push_back(-1);
      return;
    }
    out.push_back(n.sym);
    for (int a : n.args) flatten(a, out);
  }

  int rename_vars(int t, std::map<int, int>& rename) {
    const auto& n = bank_.node(t);
    if (n.var) {
      auto [it, inserted] = rename.emplace(n.sym, static_cast<int>(rename.size()));
      return bank_.variable(it->second);
    }
    if (n.ground) return t;
    const int sym = n.sym;
    const std::vector<int> old = n.args;
    std::vector<int> args;
    for (int a : old) args.push_back(rename_vars(a, rename));
    return bank_.make(sym, std::move(args));
  }

  int shift(int t, int offset) {
    if (offset == 0) return t;
    const auto& n = bank_.node(t);
    if (n.var) return bank_.variable(n.sym + offset);
    if (n.ground) return t;
    const int sym = n.sym;
    const std::vector<int> old = n.args;
    std::vector<int> args;
    for (int a : old) args.push_back(shift(a, offset));
    return bank_.make(sym, std::move(args));
  }

  bool subsume_from(const std::vector<Lit>& c, std::size_t i, const PClause& d) {
    if (i == c.size()) return true;
    for (const auto& k : d.lits) {
      if (k.positive != c[i].positive || head(k.atom) != head(c[i].atom)) continue;
      auto m = bindings_.mark();
      bool ok = bindings_.match(c[i].atom, k.atom) && subsume_from(c, i + 1, d);
      bindings_.undo(m);
      if (ok) return true;
    }
    return false;
  }

  TermBank bank_;
  Bindings bindings_;
  int eq_;
};

struct LitsHash {
  std::size_t operator()(const std::vector<Lit>& lits) const {
    std::size_t h = 0;
    for (const auto& l : lits) {
      h = h * 1000003u ^ (static_cast<std::size_t>(l.atom) * 2 + (l.positive ? 1 : 0));
    }
    return h;
  }
};

using Key = std::pair<bool, int>;  // (sign, predicate)

class Saturation {
 public:
  Saturation(Engine& engine, const ProverLimits& limits)
      : engine_(engine), limits_(limits), start_(std::chrono::steady_clock::now()) {}

  // Usable clauses are active from the start and never selected as given.
  void add(const Clause& c, bool support) {
    Engine::VarMap vars;
    auto pc = engine_.normalize(engine_.raw_clause(c, vars));
    if (!pc) return;
    if (pc->lits.empty()) {
      if (refuted_ < 0) refuted_ = store(std::move(*pc));
      return;
    }
    if (!seen_.insert(pc->lits).second) return;
    int id = store(std::move(*pc));
    if (support) {
      enqueue(id);
    } else {
      activate(id);
    }
  }

  ProofResult run() {
    ProofResult result;
    std::size_t picks = 0;
    while (refuted_ < 0) {
      if (auto limit = exhausted()) {
        result.kind = ProofResult::Kind::kResourceOut;
        result.limit = *limit;
        return finish(result);
      }
      int id = select(picks++);
      if (id < 0) break;
      if (forward_subsumed(id)) continue;
      backward_subsume(id);
      activate(id);
      ++given_;
      generate(id);
    }
    if (refuted_ >= 0) return finish(result);
    if (discarded_) {
      result.kind = ProofResult::Kind::kResourceOut;
      result.limit = ProofResult::Limit::kWeight;
    } else {
      result.kind = ProofResult::Kind::kSaturated;
    }
    return finish(result);
  }

 private:
  struct Entry {
    std::size_t weight;
    int id;
    bool operator>(const Entry& o) const {
      return weight != o.weight ? weight > o.weight : id > o.id;
    }
  };

  // Four picks by weight, then the oldest clause.
  int select(std::size_t pick) {
    const bool oldest = pick % 5 == 4;
    while (!by_weight_.empty() || !by_age_.empty()) {
      int id;
      if ((oldest || by_weight_.empty()) && !by_age_.empty()) {
        id = by_age_.front();
        by_age_.pop_front();
      } else {
        id = by_weight_.top().id;
        by_weight_.pop();
      }
      auto i = static_cast<std::size_t>(id);
      if (taken_[i] || deleted_[i]) continue;
      taken_[i] = true;
      return id;
    }
    return -1;
  }

  void generate(int id) {
    const PClause given = clauses_[static_cast<std::size_t>(id)];
    std::vector<PClause> fresh;
    std::vector<std::vector<int>> parents;
    engine_.factors(given, fresh);
    parents.resize(fresh.size(), {id});
    for (std::size_t i = 0; i < given.lits.size(); ++i) {
      const Lit& l = given.lits[i];
      auto it = index_.find({!l.positive, engine_.head(l.atom)});
      if (it == index_.end()) continue;
      const std::vector<int> partners = it->second;
      for (int other : partners) {
        if (deleted_[static_cast<std::size_t>(other)]) continue;
        engine_.resolve_literal(given, i, clauses_[static_cast<std::size_t>(other)], given.vars,
                                fresh);
        parents.resize(fresh.size(), {id, other});
      }
    }
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      if ((k & 255) == 255 && exhausted()) return;
      auto n = engine_.normalize(std::move(fresh[k]));
      if (!n) continue;
      ++generated_;
      n->parents = parents[k];
      if (n->lits.empty()) {
        refuted_ = store(std::move(*n));
        return;
      }
      if (n->weight > limits_.max_weight) {
        discarded_ = true;
        continue;
      }
      if (!seen_.insert(n->lits).second) continue;
      int nid = store(std::move(*n));
      if (forward_subsumed(nid)) {
        deleted_[static_cast<std::size_t>(nid)] = true;
        continue;
      }
      enqueue(nid);
    }
  }

  std::optional<ProofResult::Limit> exhausted() const {
    if (limits_.cancel && limits_.cancel->load()) return ProofResult::Limit::kCancelled;
    if (clauses_.size() > limits_.max_clauses) return ProofResult::Limit::kClauses;
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (elapsed > limits_.max_seconds) return ProofResult::Limit::kTime;
    return std::nullopt;
  }

  int store(PClause c) {
    clauses_.push_back(std::move(c));
    deleted_.push_back(false);
    taken_.push_back(false);
    return static_cast<int>(clauses_.size() - 1);
  }

  void enqueue(int id) {
    by_weight_.push({clauses_[static_cast<std::size_t>(id)].weight, id});
    by_age_.push_back(id);
  }

  Key key(const Lit& l) const { return {l.positive, engine_.head(l.atom)}; }

  void activate(int id) {
    const auto& c = clauses_[static_cast<std::size_t>(id)];
    std::set<Key> keys;
    for (const auto& l : c.lits) keys.insert(key(l));
    for (const auto& k : keys) index_[k].push_back(id);
    first_[key(c.lits.front())].push_back(id);
  }

  // A subsumer's first literal maps onto a literal of d with the same key.
  bool forward_subsumed(int id) {
    const PClause& d = clauses_[static_cast<std::size_t>(id)];
    std::set<Key> keys;
    for (const auto& l : d.lits) keys.insert(key(l));
    for (const auto& k : keys) {
      auto it = first_.find(k);
      if (it == first_.end()) continue;
      for (int a : it->second) {
        if (a == id || deleted_[static_cast<std::size_t>(a)]) continue;
        if (engine_.subsumes(clauses_[static_cast<std::size_t>(a)], d)) return true;
      }
    }
    return false;
  }

  void backward_subsume(int id) {
    const PClause& c = clauses_[static_cast<std::size_t>(id)];
    auto it = index_.find(key(c.lits.front()));
    if (it == index_.end()) return;
    for (int a : it->second) {
      if (deleted_[static_cast<std::size_t>(a)]) continue;
      if (engine_.subsumes(c, clauses_[static_cast<std::size_t>(a)])) {
        deleted_[static_cast<std::size_t>(a)] = true;
      }
    }
  }

  ProofResult finish(ProofResult r) {
    r.generated = generated_;
    r.given = given_;
    if (refuted_ >= 0) {
      r.kind = ProofResult::Kind::kRefuted;
      r.limit = ProofResult::Limit::kNone;
      std::set<int> seen;
      std::vector<int> stack{refuted_};
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        if (!seen.insert(c).second) continue;
        for (int p : clauses_[static_cast<std::size_t>(c)].parents) stack.push_back(p);
      }
      r.proof_length = seen.size();
    }
    return r;
  }

  Engine& engine_;
  const ProverLimits& limits_;
  std::chrono::steady_clock::time_point start_;
  std::vector<PClause> clauses_;
  std::vector<bool> deleted_;
  std::vector<bool> taken_;
  std::map<Key, std::vector<int>> index_;
  std::map<Key, std::vector<int>> first_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> by_weight_;
  std::deque<int> by_age_;
  std::unordered_set<std::vector<Lit>, LitsHash> seen_;
  int refuted_ = -1;
  bool discarded_ = false;
  std::size_t generated_ = 0;
  std::size_t given_ = 0;
};

ProofResult run_prover(std::span<const Formula> usable, std::span<const Formula> support,
                       const Formula& goal, bool use_sos, const ProverLimits& limits) {
  Clausifier clausifier;
  std::vector<Clause> clauses;
  std::size_t usable_end = 0;
  std::size_t support_end = 0;
  try {
    for (const auto& f : usable) clausifier.add(f);
    usable_end = clausifier.size();
    for (const auto& f : support) clausifier.add(f);
    clausifier.add(Formula::negation(goal));
    support_end = clausifier.size();
    clauses = clausifier.finish();
  } catch (const std::length_error&) {
    ProofResult r;
    r.kind = ProofResult::Kind::kResourceOut;
    r.limit = ProofResult::Limit::kClauses;
    return r;
  }
  Engine engine;
  Saturation sat(engine, limits);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const bool in_support = !use_sos || (i >= usable_end && i < support_end);
    sat.add(clauses[i], in_support);
  }
  return sat.run();
}

}  // namespace

ProofResult prove(std::span<const Formula> premises, const Formula& goal,
                  const ProverLimits& limits) {
  return run_prover(premises, {}, goal, false, limits);
}

ProofResult prove(std::span<const Formula> usable, std::span<const Formula> support,
                  const Formula& goal, const ProverLimits& limits) {
  return run_prover(usable, support, goal, true, limits);
}

namespace {

std::set<std::string> symbols_of(const Formula& f) {
  Signature sig = signature_of(f);
  std::set<std::string> out;
  for (const auto& [name, arity] : sig.predicates) out.insert("p:" + name);
  for (const auto& [name, arity] : sig.functions) out.insert("f:" + name);
  for (const auto& name : sig.constants) out.insert("c:" + name);
  return out;
}

}  // namespace

std::vector<std::size_t> select_relevant(std::span<const Formula> premises,
                                         std::span<const Formula> seeds, int depth,
                                         double tolerance) {
  std::vector<std::set<std::string>> symbols;
  std::map<std::string, std::size_t> occurrences;
  for (const auto& p : premises) {
    symbols.push_back(symbols_of(p));
    for (const auto& s : symbols.back()) ++occurrences[s];
  }
  // Triggers of each premise: its symbols no more common than tolerance
  // times its rarest one.
  std::map<std::string, std::vector<std::size_t>> triggered_by;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (symbols[i].empty()) continue;
    std::size_t rarest = SIZE_MAX;
    for (const auto& s : symbols[i]) rarest = std::min(rarest, occurrences[s]);
    for (const auto& s : symbols[i]) {
      if (static_cast<double>(occurrences[s]) <= tolerance * static_cast<double>(rarest)) {
        triggered_by[s].push_back(i);
      }
    }
  }
  std::set<std::string> seen;
  std::vector<std::string> frontier;
  for (const auto& f : seeds) {
    for (const auto& s : symbols_of(f)) {
      if (seen.insert(s).second) frontier.push_back(s);
    }
  }
  std::set<std::size_t> chosen;
  for (int round = 0; round < depth && !frontier.empty(); ++round) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      auto it = triggered_by.find(s);
      if (it == triggered_by.end()) continue;
      for (std::size_t i : it->second) {
        if (!chosen.insert(i).second) continue;
        for (const auto& t : symbols[i]) {
          if (seen.insert(t).second) next.push_back(t);
        }
      }
    }
    frontier = std::move(next);
  }
  return {chosen.begin(), chosen.end()};
}

ProofResult prove_sliced(std::span<const Formula> usable, std::span<const Formula> support,
                         const Formula& goal, const ProverLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  auto spent = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto run = [&](std::span<const Formula> u, std::span<const Formula> s, double share) {
    ProverLimits part = limits;
    part.max_seconds = limits.max_seconds * share;
    return prove(u, s, goal, part);
  };
  auto decided = [](const ProofResult& r) {
    return r.kind == ProofResult::Kind::kRefuted || r.limit == ProofResult::Limit::kCancelled;
  };

  // Goal-directed: local facts join the usable side, only ¬goal is supported.
  if (goal.kind() != Formula::Kind::kFalsum && !support.empty()) {
    std::vector<Formula> everything(usable.begin(), usable.end());
    everything.insert(everything.end(), support.begin(), support.end());
    ProofResult r = run(everything, {}, 0.25);
    if (decided(r)) return r;
  }

  std::vector<Formula> goal_only{goal};
  std::vector<Formula> all_seeds(support.begin(), support.end());
  all_seeds.push_back(goal);
  struct Slice {
    std::vector<std::size_t> picked;
    double share;
  };
  std::vector<Slice> slices{{select_relevant(usable, goal_only, 1), 0.1},
                            {select_relevant(usable, all_seeds, 1), 0.1},
                            {select_relevant(usable, all_seeds, 2), 0.15}};
  std::vector<std::vector<std::size_t>> tried;
  for (const auto& slice : slices) {
    if (slice.picked.size() == usable.size()) continue;
    if (std::find(tried.begin(), tried.end(), slice.picked) != tried.end()) continue;
    tried.push_back(slice.picked);
    std::vector<Formula> subset;
    for (std::size_t i : slice.picked) subset.push_back(usable[i]);
    ProofResult r = run(subset, support, slice.share);
    if (decided(r)) return r;
  }
  ProverLimits rest = limits;
  rest.max_seconds = std::max(0.0, limits.max_seconds - spent());
  return prove(usable, support, goal, rest);
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Engine engine;
  Engine::VarMap vars;
  int ta = engine.term_of(a, vars);
  int tb = engine.term_of(b, vars);
  if (!engine.unify(ta, tb)) return std::nullopt;
  std::vector<std::string> names(vars.size());
  for (const auto& [name, index] : vars) names[static_cast<std::size_t>(index)] = name;
  Substitution out;
  for (const auto& [name, index] : vars) {
    Engine::VarMap scratch{{name, index}};
    Term t = engine.term_back(engine.apply(engine.term_of(Term::variable(name), scratch)), &names);
    if (!(t.kind() == Term::Kind::kVariable && t.name() == name)) out.emplace(name, t);
  }
  return out;
}

std::vector<Clause> resolve(const Clause& c1, const Clause& c2, bool rename_apart) {
  Engine engine;
  Engine::VarMap vars1;
  PClause a = engine.raw_clause(c1, vars1);
  Engine::VarMap vars2;
  PClause b = rename_apart ? engine.raw_clause(c2, vars2) : engine.raw_clause(c2, vars1);
  const int offset = rename_apart ? static_cast<int>(vars1.size()) : 0;
  std::vector<PClause> raw;
  for (std::size_t i = 0; i < a.lits.size(); ++i) engine.resolve_literal(a, i, b, offset, raw);
  std::vector<Clause> out;
  std::set<std::vector<Lit>> seen;
  for (auto& r : raw) {
    auto n = engine.normalize(std::move(r), false);
    if (n && seen.insert(n->lits).second) out.push_back(engine.clause_back(*n));
  }
  return out;
}

bool subsumes(const Clause& c, const Clause& d) {
  Engine engine;
  Engine::VarMap vc;
  Engine::VarMap vd;
  PClause pc = engine.raw_clause(c, vc);
  PClause pd = engine.raw_clause(d, vd);
  return engine.subsumes(pc, pd);
}

}  // namespace elfe
