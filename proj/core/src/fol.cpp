#include "elfe/fol.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace elfe {

// ---------------------------------------------------------------------------
// Term

Term Term::variable(std::string name) { return Term(Kind::kVariable, std::move(name), {}); }

Term Term::constant(std::string name) { return Term(Kind::kConstant, std::move(name), {}); }

Term Term::apply(std::string function, std::vector<Term> args) {
  return Term(Kind::kApplication, std::move(function), std::move(args));
}

bool operator==(const Term& a, const Term& b) {
  return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.name_ != b.name_) return a.name_ < b.name_;
  return std::lexicographical_compare(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                      b.args_.end());
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> children;
  std::vector<std::string> vars;
};

namespace {

const std::string kEmptyName;
const std::vector<std::string> kNoVars;

}  // namespace

Formula Formula::predicate(std::string name, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::kPredicate, std::move(name), std::move(args), {}, {}}));
}

Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::kEqual, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::kNot, {}, {}, {std::move(f)}, {}}));
}

Formula Formula::conjunction(Formula l, Formula r) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::kAnd, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::disjunction(Formula l, Formula r) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::kOr, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::implication(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::kImplies, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::equivalence(Formula l, Formula r) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::kIff, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula(std::make_shared<const Node>(
      Node{Kind::kForall, {}, {}, {std::move(body)}, std::move(vars)}));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula(std::make_shared<const Node>(
      Node{Kind::kExists, {}, {}, {std::move(body)}, std::move(vars)}));
}

Formula Formula::falsum() {
  static const Formula kFalsum(std::make_shared<const Node>(Node{Kind::kFalsum, {}, {}, {}, {}}));
  return kFalsum;
}

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::is_binary() const {
  switch (kind()) {
    case Kind::kAnd:
    case Kind::kOr:
    case Kind::kImplies:
    case Kind::kIff:
      return true;
    default:
      return false;
  }
}

const std::string& Formula::name() const {
  return node_->kind == Kind::kPredicate ? node_->name : kEmptyName;
}

std::span<const Term> Formula::terms() const { return node_->terms; }

const Formula& Formula::operand() const {
  assert(node_->kind == Kind::kNot || is_quantifier());
  return node_->children.front();
}

const Formula& Formula::left() const {
  assert(is_binary());
  return node_->children[0];
}

const Formula& Formula::right() const {
  assert(is_binary());
  return node_->children[1];
}

const std::vector<std::string>& Formula::vars() const {
  return is_quantifier() ? node_->vars : kNoVars;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.vars == y.vars && x.terms == y.terms &&
         x.children == y.children;
}

Formula conjoin(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("conjoin: no formulas");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::conjunction(out, parts[i]);
  return out;
}

Formula disjoin(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("disjoin: no formulas");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::disjunction(out, parts[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Variables and signatures

namespace {

void collect_term_vars(const Term& t, const std::set<std::string>& bound,
                       std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is_variable()) {
    if (!bound.contains(t.name()) && seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_term_vars(a, bound, out, seen);
}

void collect_free_vars(const Formula& f, std::set<std::string>& bound,
                       std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f.kind()) {
    case Formula::Kind::kPredicate:
    case Formula::Kind::kEqual:
      for (const auto& t : f.terms()) collect_term_vars(t, bound, out, seen);
      return;
    case Formula::Kind::kFalsum:
      return;
    case Formula::Kind::kNot:
      collect_free_vars(f.operand(), bound, out, seen);
      return;
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      std::vector<std::string> added;
      for (const auto& v : f.vars()) {
        if (bound.insert(v).second) added.push_back(v);
      }
      collect_free_vars(f.operand(), bound, out, seen);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    default:
      collect_free_vars(f.left(), bound, out, seen);
      collect_free_vars(f.right(), bound, out, seen);
      return;
  }
}

}  // namespace

std::vector<std::string> free_vars_ordered(const Formula& f) {
  std::set<std::string> bound;
  std::set<std::string> seen;
  std::vector<std::string> out;
  collect_free_vars(f, bound, out, seen);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  auto ordered = free_vars_ordered(f);
  return {ordered.begin(), ordered.end()};
}

std::set<std::string> term_vars(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_term_vars(t, {}, out, seen);
  return seen;
}

bool is_closed(const Formula& f) { return free_vars_ordered(f).empty(); }

bool contains_quantifier(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kForall:
    case Formula::Kind::kExists:
      return true;
    case Formula::Kind::kNot:
      return contains_quantifier(f.operand());
    default:
      if (f.is_binary()) return contains_quantifier(f.left()) || contains_quantifier(f.right());
      return false;
  }
}

void Signature::add(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kVariable:
      return;
    case Term::Kind::kConstant:
      constants.insert(t.name());
      return;
    case Term::Kind::kApplication:
      functions.emplace(t.name(), t.args().size());
      for (const auto& a : t.args()) add(a);
      return;
  }
}

void Signature::add(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kPredicate:
      predicates.emplace(f.name(), f.terms().size());
      for (const auto& t : f.terms()) add(t);
      return;
    case Formula::Kind::kEqual:
      uses_equality = true;
      for (const auto& t : f.terms()) add(t);
      return;
    case Formula::Kind::kFalsum:
      return;
    case Formula::Kind::kNot:
    case Formula::Kind::kForall:
    case Formula::Kind::kExists:
      add(f.operand());
      return;
    default:
      add(f.left());
      add(f.right());
      return;
  }
}

Signature signature_of(const Formula& f) {
  Signature s;
  s.add(f);
  return s;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (std::size_t k = 0;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const Substitution& mapping) {
  switch (t.kind()) {
    case Term::Kind::kVariable: {
      auto it = mapping.find(t.name());
      return it == mapping.end() ? t : it->second;
    }
    case Term::Kind::kConstant:
      return t;
    case Term::Kind::kApplication: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, mapping));
      return Term::apply(t.name(), std::move(args));
    }
  }
  return t;
}

Formula substitute(const Formula& f, const Substitution& mapping) {
  if (mapping.empty()) return f;
  switch (f.kind()) {
    case Formula::Kind::kPredicate: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substitute(t, mapping));
      return Formula::predicate(f.name(), std::move(args));
    }
    case Formula::Kind::kEqual:
      return Formula::equal(substitute(f.terms()[0], mapping), substitute(f.terms()[1], mapping));
    case Formula::Kind::kFalsum:
      return f;
    case Formula::Kind::kNot:
      return Formula::negation(substitute(f.operand(), mapping));
    case Formula::Kind::kAnd:
      return Formula::conjunction(substitute(f.left(), mapping), substitute(f.right(), mapping));
    case Formula::Kind::kOr:
      return Formula::disjunction(substitute(f.left(), mapping), substitute(f.right(), mapping));
    case Formula::Kind::kImplies:
      return Formula::implication(substitute(f.left(), mapping), substitute(f.right(), mapping));
    case Formula::Kind::kIff:
      return Formula::equivalence(substitute(f.left(), mapping), substitute(f.right(), mapping));
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      const Formula& body = f.operand();
      const auto body_free = free_vars(body);
      Substitution inner;
      for (const auto& [name, term] : mapping) {
        if (body_free.contains(name) &&
            std::find(f.vars().begin(), f.vars().end(), name) == f.vars().end()) {
          inner.emplace(name, term);
        }
      }
      if (inner.empty()) return f;
      std::set<std::string> range_vars;
      for (const auto& [name, term] : inner) {
        for (const auto& v : term_vars(term)) range_vars.insert(v);
      }
      std::set<std::string> taken = range_vars;
      taken.insert(body_free.begin(), body_free.end());
      taken.insert(f.vars().begin(), f.vars().end());
      std::vector<std::string> vars;
      for (const auto& v : f.vars()) {
        if (range_vars.contains(v)) {
          std::string renamed = fresh_name(v, taken);
          taken.insert(renamed);
          inner.insert_or_assign(v, Term::variable(renamed));
          vars.push_back(std::move(renamed));
        } else {
          vars.push_back(v);
        }
      }
      Formula new_body = substitute(body, inner);
      return f.kind() == Formula::Kind::kForall ? Formula::forall(std::move(vars), new_body)
                                                : Formula::exists(std::move(vars), new_body);
    }
  }
  return f;
}

OpenedFormula fix_constants(const Formula& f, const std::set<std::string>& taken) {
  std::vector<std::string> vars;
  Formula body = f;
  while (body.kind() == Formula::Kind::kForall) {
    for (const auto& v : body.vars()) {
      // An inner block rebinding a name shadows the outer one.
      std::erase(vars, v);
      vars.push_back(v);
    }
    body = body.operand();
  }
  if (vars.empty()) return {f, {}};

  std::set<std::string> used = taken;
  const auto existing = signature_of(body).constants;
  used.insert(existing.begin(), existing.end());

  Substitution mapping;
  std::vector<Term> constants;
  for (const auto& v : vars) {
    std::string name = used.contains(v) ? fresh_name(v, used) : v;
    used.insert(name);
    Term c = Term::constant(name);
    mapping.emplace(v, c);
    constants.push_back(std::move(c));
  }
  return {substitute(body, mapping), std::move(constants)};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::kIff: return 1;
    case Formula::Kind::kImplies: return 2;
    case Formula::Kind::kOr: return 3;
    case Formula::Kind::kAnd: return 4;
    case Formula::Kind::kNot: return 5;
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: return 0;
    default: return 6;
  }
}

std::string_view connective(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::kAnd: return " ∧ ";
    case Formula::Kind::kOr: return " ∨ ";
    case Formula::Kind::kImplies: return " → ";
    case Formula::Kind::kIff: return " ↔ ";
    default: return " ? ";
  }
}

void print_term(const Term& t, std::string& out) {
  out += t.name();
  if (t.is_application()) {
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ',';
      print_term(t.args()[i], out);
    }
    out += ')';
  }
}

// `rightmost` is true when nothing follows the subformula inside its
// enclosing group, so a quantifier may extend without parentheses.
void print_formula(const Formula& f, std::string& out, bool rightmost);

void print_child(const Formula& child, int parent_prec, bool need_parens_on_equal,
                 std::string& out, bool rightmost) {
  const int prec = precedence(child.kind());
  bool parens = prec < parent_prec || (prec == parent_prec && need_parens_on_equal);
  if (child.is_quantifier()) parens = !rightmost;
  if (parens) {
    out += '(';
    print_formula(child, out, true);
    out += ')';
  } else {
    print_formula(child, out, rightmost);
  }
}

void print_formula(const Formula& f, std::string& out, bool rightmost) {
  switch (f.kind()) {
    case Formula::Kind::kPredicate:
      out += f.name();
      if (!f.terms().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ',';
          print_term(f.terms()[i], out);
        }
        out += ')';
      }
      return;
    case Formula::Kind::kEqual:
      print_term(f.terms()[0], out);
      out += " = ";
      print_term(f.terms()[1], out);
      return;
    case Formula::Kind::kFalsum:
      out += "⊥";
      return;
    case Formula::Kind::kNot:
      if (f.operand().kind() == Formula::Kind::kEqual) {
        print_term(f.operand().terms()[0], out);
        out += " ≠ ";
        print_term(f.operand().terms()[1], out);
        return;
      }
      out += "¬";
      print_child(f.operand(), precedence(Formula::Kind::kNot), false, out, rightmost);
      return;
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      out += f.kind() == Formula::Kind::kForall ? "∀" : "∃";
      for (std::size_t i = 0; i < f.vars().size(); ++i) {
        if (i) out += ',';
        out += f.vars()[i];
      }
      out += ". ";
      print_formula(f.operand(), out, rightmost);
      return;
    }
    default: {
      const int prec = precedence(f.kind());
      const bool left_assoc = f.kind() == Formula::Kind::kAnd || f.kind() == Formula::Kind::kOr;
      // ≠ prints like an atom even though it is a negation.
      auto effective = [](const Formula& g) {
        return g.kind() == Formula::Kind::kNot && g.operand().kind() == Formula::Kind::kEqual;
      };
      const Formula& l = f.left();
      const Formula& r = f.right();
      if (effective(l)) {
        print_formula(l, out, false);
      } else {
        print_child(l, prec, !left_assoc, out, false);
      }
      out += connective(f.kind());
      if (effective(r)) {
        print_formula(r, out, rightmost);
      } else {
        print_child(r, prec, left_assoc || f.kind() == Formula::Kind::kIff, out, rightmost);
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, out, true);
  return out;
}

}  // namespace elfe
