#include "elfe/desugar.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace elfe {

std::string_view to_string(DeclKind kind) {
  switch (kind) {
    case DeclKind::kAxiom:
      return "Axiom";
    case DeclKind::kDefinition:
      return "Definition";
    case DeclKind::kLemma:
      return "Lemma";
  }
  return "?";
}

std::vector<Premise> Document::ambient_for(std::size_t index) const {
  std::vector<Premise> out = library_premises;
  for (std::size_t i = 0; i < index && i < decls.size(); ++i) {
    out.push_back({decls[i].label, decls[i].kind, decls[i].formula});
  }
  return out;
}

Formula implicit_quantify(const Formula& f, const std::set<std::string>& fixed) {
  std::vector<std::string> vars;
  for (auto& v : free_vars_ordered(f)) {
    if (!fixed.contains(v)) vars.push_back(std::move(v));
  }
  return Formula::forall(std::move(vars), f);
}

namespace {

bool contains_falsum(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kFalsum:
      return true;
    case Formula::Kind::kPredicate:
    case Formula::Kind::kEqual:
      return false;
    case Formula::Kind::kNot:
    case Formula::Kind::kForall:
    case Formula::Kind::kExists:
      return contains_falsum(f.operand());
    default:
      return contains_falsum(f.left()) || contains_falsum(f.right());
  }
}

class Desugarer {
 public:
  Desugarer(NotationScope notations, std::vector<Premise> premises)
      : notations_(std::move(notations)), library_premises_(std::move(premises)) {
    for (const auto& p : library_premises_) {
      labels_.insert(p.label);
      note_arities(p.formula, {});
    }
    for (const auto& n : notations_.patterns()) predicate_arity_.emplace(n.name, n.arity);
  }

  void include(const LibraryScope& scope, SourceLocation where) {
    for (const auto& n : scope.notations.patterns()) register_notation(n, where);
    for (const auto& p : scope.premises) {
      auto same = std::find_if(library_premises_.begin(), library_premises_.end(),
                               [&](const Premise& q) { return q.label == p.label; });
      if (same != library_premises_.end()) {
        // Diamond includes bring the same premise twice.
        if (!(same->formula == p.formula)) {
          fail(ErrorCode::kDuplicateLabel, where,
               fmt::format("label '{}' is declared by two included libraries", p.label));
        }
        continue;
      }
      labels_.insert(p.label);
      note_arities(p.formula, where);
      library_premises_.push_back(p);
    }
  }

  void notation(const RawItem& item) {
    try {
      register_notation(parse_notation(item.label, item.pattern, item.where), item.where);
    } catch (const ElfeError& e) {
      absorb(e);
    }
  }

  void declaration(const RawItem& item) {
    Decl decl;
    decl.label = item.label;
    decl.where = item.where;
    decl.auto_label = item.auto_label;
    decl.kind = item.kind == RawItem::Kind::kAxiom        ? DeclKind::kAxiom
                : item.kind == RawItem::Kind::kDefinition ? DeclKind::kDefinition
                                                          : DeclKind::kLemma;
    if (labels_.contains(item.label)) {
      fail(ErrorCode::kDuplicateLabel, item.where,
           fmt::format("label '{}' is already declared", item.label));
    }
    const std::size_t errors_before = diagnostics_.size();
    auto formula = convert(*item.sentence, {}, /*top_level=*/true);
    if (formula) {
      decl.formula = implicit_quantify(*formula);
      if (contains_falsum(decl.formula)) {
        fail(ErrorCode::kStructureError, item.where,
             "'contradiction' can only be the goal of a proof step");
      }
    }
    if (item.proof && formula) {
      auto opened = fix_constants(decl.formula);
      live_.clear();
      for (const auto& c : opened.constants) live_.insert(c.name());
      decl.proof = proof_tree(item.proof->steps, item.proof->where, item.proof->closed_at);
      live_.clear();
    }
    labels_.insert(item.label);
    if (diagnostics_.size() == errors_before) decls_.push_back(std::move(decl));
  }

  Document finish(std::vector<std::string> includes) {
    if (!diagnostics_.empty()) throw ElfeError(std::move(diagnostics_));
    Document doc;
    doc.includes = std::move(includes);
    doc.decls = std::move(decls_);
    doc.notations = notations_;
    doc.library_premises = std::move(library_premises_);
    return doc;
  }

  void absorb(const ElfeError& e) {
    for (const auto& d : e.diagnostics()) diagnostics_.push_back(d);
  }

 private:
  void fail(ErrorCode code, SourceLocation where, std::string message) {
    diagnostics_.push_back({code, where, std::move(message)});
  }

  void register_notation(const NotationPattern& pattern, SourceLocation where) {
    auto it = predicate_arity_.find(pattern.name);
    if (it != predicate_arity_.end() && it->second != pattern.arity) {
      fail(ErrorCode::kConflictingNotation, where,
           fmt::format("'{}' is already used with {} arguments, notation has {}", pattern.name,
                       it->second, pattern.arity));
      return;
    }
    try {
      notations_ = notations_.with(pattern);
      predicate_arity_.emplace(pattern.name, pattern.arity);
    } catch (const ElfeError& e) {
      absorb(e);
    }
  }

  // Records symbol arities and reports the first inconsistent use.
  bool note_arities(const Formula& f, SourceLocation where) {
    Signature sig = signature_of(f);
    bool ok = true;
    auto check = [&](std::map<std::string, std::size_t>& table, const std::string& name,
                     std::size_t arity, std::string_view what) {
      auto [it, inserted] = table.emplace(name, arity);
      if (!inserted && it->second != arity) {
        fail(ErrorCode::kArityMismatch, where,
             fmt::format("{} '{}' is used with {} arguments, earlier with {}", what, name, arity,
                         it->second));
        ok = false;
      }
    };
    for (const auto& [name, arity] : sig.predicates) check(predicate_arity_, name, arity, "predicate");
    for (const auto& [name, arity] : sig.functions) check(function_arity_, name, arity, "function");
    return ok;
  }

  // Names bound by a quantifier of the sentence stay variables. Other names
  // are variables at top level and must be live constants inside proofs.
  std::optional<Term> bind(const Term& t, const std::set<std::string>& bound, bool top_level,
                           SourceLocation where) {
    if (t.is_application()) {
      std::vector<Term> args;
      for (const auto& a : t.args()) {
        auto b = bind(a, bound, top_level, where);
        if (!b) return std::nullopt;
        args.push_back(std::move(*b));
      }
      return Term::apply(t.name(), std::move(args));
    }
    if (bound.contains(t.name()) || top_level) return Term::variable(t.name());
    if (live_.contains(t.name())) return Term::constant(t.name());
    fail(ErrorCode::kUnknownName, where,
         fmt::format("'{}' is not a fixed point of this proof", t.name()));
    return std::nullopt;
  }

  std::optional<Formula> convert(const RawSentence& s, const std::set<std::string>& bound,
                                 bool top_level) {
    using K = RawSentence::Kind;
    switch (s.kind) {
      case K::kAtom: {
        Formula atom = Formula::falsum();
        try {
          atom = match_atom(s.atom, notations_);
        } catch (const ElfeError& e) {
          absorb(e);
          return std::nullopt;
        }
        const bool negated = atom.kind() == Formula::Kind::kNot;
        const Formula& core = negated ? atom.operand() : atom;
        if (core.kind() == Formula::Kind::kFalsum) return atom;
        std::vector<Term> args;
        for (const auto& t : core.terms()) {
          auto b = bind(t, bound, top_level, s.atom.where);
          if (!b) return std::nullopt;
          args.push_back(std::move(*b));
        }
        Formula out = core.kind() == Formula::Kind::kEqual
                          ? Formula::equal(args[0], args[1])
                          : Formula::predicate(core.name(), std::move(args));
        if (!note_arities(out, s.atom.where)) return std::nullopt;
        return negated ? Formula::negation(out) : out;
      }
      case K::kNot: {
        auto f = convert(s.children[0], bound, top_level);
        if (!f) return std::nullopt;
        return Formula::negation(*f);
      }
      case K::kForall:
      case K::kExists: {
        std::set<std::string> inner = bound;
        for (const auto& v : s.vars) {
          if (!top_level && live_.contains(v)) {
            fail(ErrorCode::kNameInUse, s.where,
                 fmt::format("'{}' is already a fixed point and cannot be quantified", v));
            return std::nullopt;
          }
          inner.insert(v);
        }
        auto body = convert(s.children[0], inner, top_level);
        if (!body) return std::nullopt;
        return s.kind == K::kForall ? Formula::forall(s.vars, *body)
                                    : Formula::exists(s.vars, *body);
      }
      default: {
        auto l = convert(s.children[0], bound, top_level);
        auto r = convert(s.children[1], bound, top_level);
        if (!l || !r) return std::nullopt;
        switch (s.kind) {
          case K::kAnd:
            return Formula::conjunction(*l, *r);
          case K::kOr:
            return Formula::disjunction(*l, *r);
          case K::kImplies:
            return Formula::implication(*l, *r);
          default:
            return Formula::equivalence(*l, *r);
        }
      }
    }
  }

  std::optional<Formula> proof_sentence(const RawSentence& s, bool falsum_allowed,
                                        const std::set<std::string>& bound = {}) {
    auto f = convert(s, bound, false);
    if (!f) return std::nullopt;
    const bool whole = f->kind() == Formula::Kind::kFalsum;
    if (contains_falsum(*f) && !(falsum_allowed && whole)) {
      fail(ErrorCode::kStructureError, s.where,
           "'contradiction' can only be the whole goal of Then or Hence");
      return std::nullopt;
    }
    return f;
  }

  std::optional<std::vector<std::string>> labels(const std::optional<std::vector<std::string>>& by,
                                                 SourceLocation where) {
    if (!by) return std::nullopt;
    for (const auto& l : *by) {
      if (!labels_.contains(l)) {
        fail(ErrorCode::kUnknownLabel, where,
             fmt::format("'{}' does not name an earlier axiom, definition or lemma", l));
      }
    }
    return by;
  }

  ProofTree proof_tree(const std::vector<RawStep>& raw, SourceLocation where,
                       SourceLocation closed_at) {
    ProofTree tree;
    tree.where = where;
    tree.closed_at = closed_at;
    // Take introduces names for the rest of the enclosing block only.
    const std::set<std::string> live_before = live_;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const RawStep& r = raw[i];
      Step step;
      step.where = r.where;
      switch (r.kind) {
        case RawStep::Kind::kAssume: {
          step.kind = Step::Kind::kAssume;
          if (auto f = proof_sentence(r.sentence, false)) step.goal = *f;
          break;
        }
        case RawStep::Kind::kThen:
        case RawStep::Kind::kHence: {
          step.kind = Step::Kind::kDerive;
          step.hence = r.kind == RawStep::Kind::kHence;
          if (auto f = proof_sentence(r.sentence, true)) step.goal = *f;
          if (r.since) {
            if (auto f = proof_sentence(*r.since, false)) step.since = *f;
          }
          step.by = labels(r.by, r.where);
          break;
        }
        case RawStep::Kind::kNote: {
          step.kind = Step::Kind::kNote;
          if (auto f = proof_sentence(r.sentence, false)) step.goal = *f;
          step.sub = proof_tree(r.steps, r.where, r.closed_at);
          break;
        }
        case RawStep::Kind::kCase: {
          step.kind = Step::Kind::kCases;
          for (; i < raw.size() && raw[i].kind == RawStep::Kind::kCase; ++i) {
            CaseBranch branch;
            branch.where = raw[i].where;
            if (auto f = proof_sentence(raw[i].sentence, false)) branch.hypothesis = *f;
            branch.body = proof_tree(raw[i].steps, raw[i].where, raw[i].closed_at);
            step.cases.push_back(std::move(branch));
          }
          --i;
          break;
        }
        case RawStep::Kind::kTake: {
          step.kind = Step::Kind::kTake;
          step.vars = r.vars;
          bool ok = true;
          for (const auto& v : r.vars) {
            if (live_.contains(v)) {
              fail(ErrorCode::kNameInUse, r.where,
                   fmt::format("'{}' is already a fixed point; Take needs a new name", v));
              ok = false;
            }
          }
          std::set<std::string> bound(r.vars.begin(), r.vars.end());
          if (auto f = proof_sentence(r.sentence, false, bound)) step.goal = *f;
          step.by = labels(r.by, r.where);
          if (ok) live_.insert(r.vars.begin(), r.vars.end());
          break;
        }
      }
      tree.steps.push_back(std::move(step));
    }
    live_ = live_before;
    return tree;
  }

  NotationScope notations_;
  std::vector<Premise> library_premises_;
  std::set<std::string> labels_;
  std::map<std::string, std::size_t> predicate_arity_;
  std::map<std::string, std::size_t> function_arity_;
  std::set<std::string> live_;
  std::vector<Decl> decls_;
  std::vector<Diagnostic> diagnostics_;
};

Document run(const RawDocument& raw, const IncludeResolver* resolve, const LibraryScope& base) {
  Desugarer d(base.notations, base.premises);
  std::vector<std::string> includes;
  for (const auto& item : raw.items) {
    switch (item.kind) {
      case RawItem::Kind::kInclude:
        includes.push_back(item.label);
        if (resolve) {
          try {
            d.include((*resolve)(item.label, item.where), item.where);
          } catch (const ElfeError& e) {
            d.absorb(e);
          }
        }
        break;
      case RawItem::Kind::kNotation:
        d.notation(item);
        break;
      default:
        d.declaration(item);
        break;
    }
  }
  return d.finish(std::move(includes));
}

}  // namespace

Document desugar(const RawDocument& raw, const IncludeResolver& resolve_include) {
  return run(raw, &resolve_include, LibraryScope{});
}

Document desugar(const RawDocument& raw, const LibraryScope& libraries) {
  return run(raw, nullptr, libraries);
}

}  // namespace elfe
