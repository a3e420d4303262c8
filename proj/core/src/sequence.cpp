#include "elfe/sequence.hpp"

#include <deque>
#include <functional>
#include <map>

#include <fmt/format.h>

namespace elfe {

std::string_view to_string(ProofKind kind) {
  switch (kind) {
    case ProofKind::kAssumed:
      return "Assumed";
    case ProofKind::kByContext:
      return "ByContext";
    case ProofKind::kSubsequence:
      return "Subsequence";
  }
  return "?";
}

std::string_view to_string(StatementRole role) {
  switch (role) {
    case StatementRole::kLemma:
      return "lemma";
    case StatementRole::kFixed:
      return "fixed";
    case StatementRole::kAssumption:
      return "assumption";
    case StatementRole::kRest:
      return "rest";
    case StatementRole::kDerivation:
      return "derivation";
    case StatementRole::kSince:
      return "since";
    case StatementRole::kNote:
      return "note";
    case StatementRole::kCases:
      return "cases";
    case StatementRole::kCase:
      return "case";
    case StatementRole::kHypothesis:
      return "hypothesis";
    case StatementRole::kCompleteness:
      return "completeness";
    case StatementRole::kWitness:
      return "witness";
    case StatementRole::kInstance:
      return "instance";
    case StatementRole::kDischarge:
      return "discharge";
  }
  return "?";
}

namespace {

void collect(const Statement& s, std::vector<const Statement*>& out) {
  out.push_back(&s);
  for (const auto& c : s.children) collect(c, out);
}

}  // namespace

const Statement* StatementSequence::find(const std::string& id) const {
  for (const auto* s : all()) {
    if (s->id == id) return s;
  }
  return nullptr;
}

std::vector<const Statement*> StatementSequence::all() const {
  std::vector<const Statement*> out;
  collect(root, out);
  return out;
}

namespace {

class Builder {
 public:
  explicit Builder(const BuildOptions& options) : options_(options) {}

  Statement make(Formula goal, ProofKind kind, StatementRole role, SourceLocation origin,
                 std::vector<std::string> context) {
    Statement s;
    s.id = fmt::format("#{}", next_++);
    s.goal = std::move(goal);
    s.kind = kind;
    s.role = role;
    s.origin = origin;
    s.context = std::move(context);
    return s;
  }

  // Children of a statement whose goal is `goal` and whose proof is `steps`.
  std::vector<Statement> block(const Formula& goal, const std::vector<Step>& steps,
                               const std::vector<std::string>& context, SourceLocation opened) {
    if (!steps.empty() && steps.front().kind == Step::Kind::kAssume) {
      const Step& first = steps.front();
      std::optional<Formula> rest_goal;
      if (goal.kind() == Formula::Kind::kImplies && goal.left() == first.goal) {
        rest_goal = goal.right();
      } else if (goal.kind() == Formula::Kind::kNot && goal.operand() == first.goal) {
        rest_goal = Formula::falsum();
      }
      if (!rest_goal) {
        throw ElfeError(Diagnostic{ErrorCode::kStructureError, first.where,
                                   fmt::format("the assumption does not match the goal {}",
                                               to_string(goal))});
      }
      std::vector<Statement> out;
      out.push_back(make(first.goal, ProofKind::kAssumed, StatementRole::kAssumption, first.where,
                         context));
      auto inner = context;
      inner.push_back(out.back().id);
      Statement rest = make(*rest_goal, ProofKind::kSubsequence, StatementRole::kRest,
                            first.where, inner);
      std::vector<Step> remaining(steps.begin() + 1, steps.end());
      rest.children = sequence(*rest_goal, remaining, inner, opened, true);
      out.push_back(std::move(rest));
      return out;
    }
    return sequence(goal, steps, context, opened, true);
  }

  // Steps in order; each sees the goals of the steps before it. Without a
  // Hence proving `goal` verbatim a final discharge statement is added.
  std::vector<Statement> sequence(const Formula& goal, const std::vector<Step>& steps,
                                  std::vector<std::string> context, SourceLocation opened,
                                  bool discharge) {
    std::vector<Statement> out;
    bool discharged = false;
    for (const Step& step : steps) {
      switch (step.kind) {
        case Step::Kind::kAssume:
          throw ElfeError(Diagnostic{ErrorCode::kStructureError, step.where,
                                     "Assume is only allowed as the first step of a proof"});
        case Step::Kind::kDerive: {
          if (step.hence && step.goal == goal) discharged = true;
          if (step.since) {
            Statement wrapper = make(step.goal, ProofKind::kSubsequence,
                                     StatementRole::kDerivation, step.where, context);
            Statement since = make(*step.since, ProofKind::kByContext, StatementRole::kSince,
                                   step.where, context);
            since.restriction = step.by;
            auto inner = context;
            inner.push_back(since.id);
            Statement main = make(step.goal, ProofKind::kByContext, StatementRole::kDerivation,
                                  step.where, inner);
            main.restriction = step.by;
            wrapper.children.push_back(std::move(since));
            wrapper.children.push_back(std::move(main));
            inline_.insert(wrapper.id);
            out.push_back(std::move(wrapper));
          } else {
            Statement s = make(step.goal, ProofKind::kByContext, StatementRole::kDerivation,
                               step.where, context);
            s.restriction = step.by;
            out.push_back(std::move(s));
          }
          context.push_back(out.back().id);
          break;
        }
        case Step::Kind::kNote: {
          Statement note = make(step.goal, ProofKind::kSubsequence, StatementRole::kNote,
                                step.where, context);
          note.children = block(step.goal, step.sub.steps, context, step.where);
          out.push_back(std::move(note));
          context.push_back(out.back().id);
          break;
        }
        case Step::Kind::kCases: {
          out.push_back(cases(step, context));
          context.push_back(out.back().id);
          break;
        }
        case Step::Kind::kTake: {
          Statement witness = make(Formula::exists(step.vars, step.goal), ProofKind::kByContext,
                                   StatementRole::kWitness, step.where, context);
          witness.restriction = step.by;
          context.push_back(witness.id);
          Substitution fix;
          for (const auto& v : step.vars) fix.emplace(v, Term::constant(v));
          Statement instance = make(substitute(step.goal, fix), ProofKind::kAssumed,
                                    StatementRole::kInstance, step.where, context);
          out.push_back(std::move(witness));
          out.push_back(std::move(instance));
          context.push_back(out.back().id);
          break;
        }
      }
    }
    if (discharge && !discharged) {
      out.push_back(make(goal, ProofKind::kByContext, StatementRole::kDischarge, opened, context));
    }
    return out;
  }

  Statement cases(const Step& step, const std::vector<std::string>& context) {
    Statement outer = make(Formula::falsum(), ProofKind::kSubsequence, StatementRole::kCases,
                           step.where, context);
    std::vector<Formula> hyps;
    for (const auto& c : step.cases) hyps.push_back(c.hypothesis);
    outer.children.push_back(make(disjoin(hyps),
                                  options_.case_completeness ? ProofKind::kByContext
                                                             : ProofKind::kAssumed,
                                  StatementRole::kCompleteness, step.where, context));
    std::vector<Formula> results;
    for (const auto& c : step.cases) {
      Statement branch = make(c.hypothesis, ProofKind::kSubsequence, StatementRole::kCase,
                              c.where, context);
      Statement hyp = make(c.hypothesis, ProofKind::kAssumed, StatementRole::kHypothesis,
                           c.where, context);
      auto inner = context;
      inner.push_back(hyp.id);
      branch.children.push_back(std::move(hyp));
      auto body = sequence(Formula::falsum(), c.body.steps, inner, c.where, false);
      if (!body.empty()) branch.goal = body.back().goal;
      for (auto& s : body) branch.children.push_back(std::move(s));
      results.push_back(branch.goal);
      outer.children.push_back(std::move(branch));
    }
    bool uniform = true;
    for (const auto& r : results) uniform = uniform && r == results.front();
    if (uniform) {
      outer.goal = results.front();
    } else {
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < results.size(); ++i) {
        parts.push_back(results[i] == hyps[i] ? hyps[i] : Formula::conjunction(hyps[i], results[i]));
      }
      outer.goal = disjoin(parts);
    }
    return outer;
  }

  // S, S1, ... breadth first over subsequences; the two halves of a since
  // step are numbered right after it.
  void number(Statement& root) {
    std::map<std::string, std::string> rename;
    int next = 0;
    auto assign = [&](Statement& s) {
      std::string id = next == 0 ? "S" : fmt::format("S{}", next);
      ++next;
      rename[s.id] = id;
    };
    assign(root);
    std::deque<Statement*> queue{&root};
    while (!queue.empty()) {
      Statement* s = queue.front();
      queue.pop_front();
      for (auto& c : s->children) {
        assign(c);
        if (inline_.contains(c.id)) {
          for (auto& g : c.children) assign(g);
        } else if (!c.children.empty()) {
          queue.push_back(&c);
        }
      }
    }
    std::function<void(Statement&)> apply = [&](Statement& s) {
      s.id = rename.at(s.id);
      for (auto& c : s.context) c = rename.at(c);
      for (auto& c : s.children) apply(c);
    };
    apply(root);
  }

 private:
  const BuildOptions& options_;
  int next_ = 0;
  std::set<std::string> inline_;
};

}  // namespace

StatementSequence build_sequence(const Decl& lemma, std::vector<Premise> ambient,
                                 const BuildOptions& options) {
  Builder b(options);
  StatementSequence seq;
  seq.lemma = lemma.label;
  seq.ambient = std::move(ambient);
  seq.root = b.make(lemma.formula, ProofKind::kSubsequence, StatementRole::kLemma, lemma.where, {});
  auto opened = fix_constants(lemma.formula);
  Statement fixed = b.make(opened.body, ProofKind::kByContext, StatementRole::kFixed,
                           lemma.where, {});
  if (lemma.proof) {
    fixed.kind = ProofKind::kSubsequence;
    fixed.children = b.block(opened.body, lemma.proof->steps, {}, lemma.where);
  }
  seq.root.children.push_back(std::move(fixed));
  b.number(seq.root);
  return seq;
}

std::vector<ContextPremise> visible_context(const StatementSequence& seq, const Statement& stmt) {
  std::vector<ContextPremise> out;
  for (const auto& p : seq.ambient) out.push_back({p.label, p.formula, false});
  for (const auto& id : stmt.context) {
    if (const Statement* s = seq.find(id)) out.push_back({s->id, s->goal, true});
  }
  return out;
}

namespace {

void dump_into(const Statement& s, int depth, std::string& out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
  out += fmt::format("{} [{}] {}", s.id, to_string(s.kind), to_string(s.goal));
  if (s.restriction) {
    std::string labels;
    for (const auto& l : *s.restriction) labels += (labels.empty() ? "" : ", ") + l;
    out += fmt::format(" by {}", labels);
  }
  if (!s.context.empty()) {
    std::string ids;
    for (const auto& c : s.context) ids += (ids.empty() ? "" : ", ") + c;
    out += fmt::format(" <- {}", ids);
  }
  out += '\n';
  for (const auto& c : s.children) dump_into(c, depth + 1, out);
}

}  // namespace

std::string dump(const StatementSequence& seq) {
  std::string out;
  dump_into(seq.root, 0, out);
  return out;
}

}  // namespace elfe
