#include "elfe/cnf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace elfe {

namespace {

constexpr std::size_t kMaxClausesPerFormula = 200000;

struct Nnf {
  enum class Kind { kLiteral, kAnd, kOr, kForall, kExists, kTrue, kFalse };
  Kind kind;
  Literal literal{true, Formula::falsum()};
  std::vector<Nnf> kids;
  std::vector<std::string> vars;

  static Nnf make(Kind k) { return Nnf{k, {true, Formula::falsum()}, {}, {}}; }
};

Nnf combine(Nnf::Kind kind, Nnf l, Nnf r) {
  const bool is_and = kind == Nnf::Kind::kAnd;
  const auto absorbing = is_and ? Nnf::Kind::kFalse : Nnf::Kind::kTrue;
  const auto neutral = is_and ? Nnf::Kind::kTrue : Nnf::Kind::kFalse;
  if (l.kind == absorbing || r.kind == absorbing) return Nnf::make(absorbing);
  if (l.kind == neutral) return r;
  if (r.kind == neutral) return l;
  Nnf out = Nnf::make(kind);
  out.kids.push_back(std::move(l));
  out.kids.push_back(std::move(r));
  return out;
}

Nnf to_nnf(const Formula& f, bool positive) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kPredicate:
    case K::kEqual: {
      Nnf n = Nnf::make(Nnf::Kind::kLiteral);
      n.literal = Literal{positive, f};
      return n;
    }
    case K::kFalsum:
      return Nnf::make(positive ? Nnf::Kind::kFalse : Nnf::Kind::kTrue);
    case K::kNot:
      return to_nnf(f.operand(), !positive);
    case K::kAnd:
      return combine(positive ? Nnf::Kind::kAnd : Nnf::Kind::kOr, to_nnf(f.left(), positive),
                     to_nnf(f.right(), positive));
    case K::kOr:
      return combine(positive ? Nnf::Kind::kOr : Nnf::Kind::kAnd, to_nnf(f.left(), positive),
                     to_nnf(f.right(), positive));
    case K::kImplies:
      return combine(positive ? Nnf::Kind::kOr : Nnf::Kind::kAnd, to_nnf(f.left(), !positive),
                     to_nnf(f.right(), positive));
    case K::kIff:
      if (positive) {
        return combine(Nnf::Kind::kAnd,
                       combine(Nnf::Kind::kOr, to_nnf(f.left(), false), to_nnf(f.right(), true)),
                       combine(Nnf::Kind::kOr, to_nnf(f.right(), false), to_nnf(f.left(), true)));
      }
      return combine(Nnf::Kind::kOr,
                     combine(Nnf::Kind::kAnd, to_nnf(f.left(), true), to_nnf(f.right(), false)),
                     combine(Nnf::Kind::kAnd, to_nnf(f.left(), false), to_nnf(f.right(), true)));
    case K::kForall:
    case K::kExists: {
      Nnf body = to_nnf(f.operand(), positive);
      if (body.kind == Nnf::Kind::kTrue || body.kind == Nnf::Kind::kFalse) return body;
      const bool universal = (f.kind() == K::kForall) == positive;
      Nnf n = Nnf::make(universal ? Nnf::Kind::kForall : Nnf::Kind::kExists);
      n.vars = f.vars();
      n.kids.push_back(std::move(body));
      return n;
    }
  }
  return Nnf::make(Nnf::Kind::kTrue);
}

void nnf_free_vars(const Nnf& n, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (n.kind) {
    case Nnf::Kind::kLiteral:
      for (const auto& v : free_vars(n.literal.atom)) {
        if (!bound.contains(v)) out.insert(v);
      }
      return;
    case Nnf::Kind::kForall:
    case Nnf::Kind::kExists: {
      std::vector<std::string> added;
      for (const auto& v : n.vars) {
        if (bound.insert(v).second) added.push_back(v);
      }
      nnf_free_vars(n.kids.front(), bound, out);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    default:
      for (const auto& k : n.kids) nnf_free_vars(k, bound, out);
      return;
  }
}

class Skolemizer {
 public:
  Skolemizer(int& next_skolem, int& next_var) : next_skolem_(next_skolem), next_var_(next_var) {}

  // Returns a quantifier-free NNF; universals become distinct clause
  // variables, existentials Skolem terms over the universals they depend on.
  Nnf run(const Nnf& n, Substitution env, std::vector<std::string> universals) {
    switch (n.kind) {
      case Nnf::Kind::kLiteral: {
        Nnf out = n;
        out.literal.atom = substitute(n.literal.atom, env);
        return out;
      }
      case Nnf::Kind::kForall: {
        for (const auto& v : n.vars) {
          std::string name = "X" + std::to_string(next_var_++);
          env.insert_or_assign(v, Term::variable(name));
          universals.push_back(name);
        }
        return run(n.kids.front(), std::move(env), std::move(universals));
      }
      case Nnf::Kind::kExists: {
        std::set<std::string> bound(n.vars.begin(), n.vars.end());
        std::set<std::string> body_free;
        nnf_free_vars(n.kids.front(), bound, body_free);
        std::set<std::string> used;
        for (const auto& v : body_free) {
          auto it = env.find(v);
          if (it != env.end()) {
            for (const auto& tv : term_vars(it->second)) used.insert(tv);
          }
        }
        std::vector<Term> args;
        for (const auto& u : universals) {
          if (used.contains(u)) args.push_back(Term::variable(u));
        }
        for (const auto& v : n.vars) {
          std::string name = std::string(kSkolemPrefix) + std::to_string(next_skolem_++);
          env.insert_or_assign(v, args.empty() ? Term::constant(name) : Term::apply(name, args));
        }
        return run(n.kids.front(), std::move(env), std::move(universals));
      }
      case Nnf::Kind::kAnd:
      case Nnf::Kind::kOr: {
        Nnf out = Nnf::make(n.kind);
        for (const auto& k : n.kids) out.kids.push_back(run(k, env, universals));
        return out;
      }
      default:
        return n;
    }
  }

 private:
  int& next_skolem_;
  int& next_var_;
};

using RawClause = std::vector<Literal>;

std::vector<RawClause> distribute(const Nnf& n) {
  switch (n.kind) {
    case Nnf::Kind::kLiteral:
      return {{n.literal}};
    case Nnf::Kind::kTrue:
      return {};
    case Nnf::Kind::kFalse:
      return {RawClause{}};
    case Nnf::Kind::kAnd: {
      auto out = distribute(n.kids[0]);
      auto more = distribute(n.kids[1]);
      out.insert(out.end(), std::make_move_iterator(more.begin()),
                 std::make_move_iterator(more.end()));
      return out;
    }
    case Nnf::Kind::kOr: {
      auto l = distribute(n.kids[0]);
      auto r = distribute(n.kids[1]);
      if (l.size() * r.size() > kMaxClausesPerFormula) {
        throw std::length_error("clausify: CNF expansion too large");
      }
      std::vector<RawClause> out;
      out.reserve(l.size() * r.size());
      for (const auto& a : l) {
        for (const auto& b : r) {
          RawClause c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
    default:
      throw std::logic_error("distribute: quantifier left after Skolemization");
  }
}

bool is_trivially_true(const Literal& l) {
  return l.positive && l.atom.kind() == Formula::Kind::kEqual &&
         l.atom.terms()[0] == l.atom.terms()[1];
}

// Removes duplicate literals; returns false for tautologies.
bool normalize(RawClause& c) {
  RawClause out;
  for (auto& l : c) {
    if (is_trivially_true(l)) return false;
    if (std::find(out.begin(), out.end(), l) != out.end()) continue;
    Literal complement{!l.positive, l.atom};
    if (std::find(out.begin(), out.end(), complement) != out.end()) return false;
    out.push_back(std::move(l));
  }
  c = std::move(out);
  return true;
}

Formula literal_formula(const Literal& l) {
  return l.positive ? l.atom : Formula::negation(l.atom);
}

}  // namespace

void Clausifier::add(const Formula& closed_formula) {
  Nnf nnf = to_nnf(closed_formula, true);
  Skolemizer skolemizer(next_skolem_, next_var_);
  Nnf ground = skolemizer.run(nnf, {}, {});
  for (auto& raw : distribute(ground)) {
    if (!normalize(raw)) continue;
    clauses_.push_back(Clause{std::move(raw), next_clause_id_++});
  }
}

std::vector<Clause> Clausifier::finish() {
  Signature sig;
  for (const auto& c : clauses_) {
    for (const auto& l : c.literals) sig.add(l.atom);
  }
  std::vector<Clause> out = clauses_;
  if (!sig.uses_equality) return out;

  const Term x = Term::variable("X");
  const Term y = Term::variable("Y");
  const Term z = Term::variable("Z");
  auto eq = [](const Term& a, const Term& b) { return Formula::equal(a, b); };
  auto add = [&](RawClause lits) { out.push_back(Clause{std::move(lits), next_clause_id_++}); };

  add({{true, eq(x, x)}});
  add({{false, eq(x, y)}, {true, eq(y, x)}});
  add({{false, eq(x, y)}, {false, eq(y, z)}, {true, eq(x, z)}});

  auto argument_vars = [](std::size_t arity) {
    std::vector<Term> vars;
    for (std::size_t i = 0; i < arity; ++i) vars.push_back(Term::variable("V" + std::to_string(i)));
    return vars;
  };
  for (const auto& [name, arity] : sig.predicates) {
    for (std::size_t pos = 0; pos < arity; ++pos) {
      auto from = argument_vars(arity);
      auto to = from;
      from[pos] = x;
      to[pos] = y;
      add({{false, eq(x, y)},
           {false, Formula::predicate(name, std::move(from))},
           {true, Formula::predicate(name, std::move(to))}});
    }
  }
  for (const auto& [name, arity] : sig.functions) {
    for (std::size_t pos = 0; pos < arity; ++pos) {
      auto from = argument_vars(arity);
      auto to = from;
      from[pos] = x;
      to[pos] = y;
      add({{false, eq(x, y)},
           {true, eq(Term::apply(name, std::move(from)), Term::apply(name, std::move(to)))}});
    }
  }
  return out;
}

std::vector<Clause> clausify(const Formula& closed_formula) {
  Clausifier c;
  c.add(closed_formula);
  return c.finish();
}

Formula to_formula(const Clause& clause) {
  if (clause.literals.empty()) return Formula::falsum();
  std::vector<Formula> parts;
  for (const auto& l : clause.literals) parts.push_back(literal_formula(l));
  Formula body = disjoin(parts);
  return Formula::forall(free_vars_ordered(body), body);
}

Formula to_formula(std::span<const Clause> clauses) {
  std::vector<Formula> parts;
  for (const auto& c : clauses) parts.push_back(to_formula(c));
  if (parts.empty()) return Formula::negation(Formula::falsum());
  return conjoin(parts);
}

std::string to_string(const Clause& clause) {
  if (clause.literals.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < clause.literals.size(); ++i) {
    if (i) out += ", ";
    const auto& l = clause.literals[i];
    out += l.positive ? "+" : "¬";
    out += to_string(l.atom);
  }
  out += "}";
  return out;
}

}  // namespace elfe
