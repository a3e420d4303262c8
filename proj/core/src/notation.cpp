#include "elfe/notation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace elfe {

namespace {

bool is_symbol(const Token& t, std::string_view text) {
  return t.kind != TokenKind::kWord && t.text == text;
}

bool is_name(const Token& t) { return t.kind == TokenKind::kWord && is_identifier(t.text); }

// term := name [ '(' term {',' term} ')' ] | '(' term ')'
std::optional<Term> parse_term(std::span<const Token> tokens, std::size_t& pos) {
  if (pos >= tokens.size()) return std::nullopt;
  const Token& t = tokens[pos];
  if (is_symbol(t, "(")) {
    std::size_t p = pos + 1;
    auto inner = parse_term(tokens, p);
    if (!inner || p >= tokens.size() || !is_symbol(tokens[p], ")")) return std::nullopt;
    pos = p + 1;
    return inner;
  }
  if (!is_name(t) || is_keyword(t.text)) return std::nullopt;
  std::size_t p = pos + 1;
  if (p < tokens.size() && is_symbol(tokens[p], "(")) {
    ++p;
    std::vector<Term> args;
    while (true) {
      auto arg = parse_term(tokens, p);
      if (!arg) return std::nullopt;
      args.push_back(std::move(*arg));
      if (p < tokens.size() && tokens[p].is(TokenKind::kComma)) {
        ++p;
        continue;
      }
      break;
    }
    if (p >= tokens.size() || !is_symbol(tokens[p], ")")) return std::nullopt;
    pos = p + 1;
    return Term::apply(t.text, std::move(args));
  }
  pos = p;
  return Term::variable(t.text);
}

std::optional<std::vector<Term>> match_pattern(const NotationPattern& pattern,
                                               std::span<const Token> tokens) {
  std::vector<Term> args;
  std::size_t pos = 0;
  for (const auto& e : pattern.elements) {
    if (e.slot) {
      auto term = parse_term(tokens, pos);
      if (!term) return std::nullopt;
      args.push_back(std::move(*term));
    } else {
      if (pos >= tokens.size() || tokens[pos].kind == TokenKind::kWord ||
          tokens[pos].text != e.literal) {
        return std::nullopt;
      }
      ++pos;
    }
  }
  if (pos != tokens.size()) return std::nullopt;
  return args;
}

std::optional<Formula> match_fallback(std::span<const Token> tokens) {
  if (tokens.size() == 1 && tokens[0].is_word("contradiction")) return Formula::falsum();

  std::size_t pos = 0;
  auto lhs = parse_term(tokens, pos);
  if (!lhs) return std::nullopt;
  if (pos == tokens.size()) {
    // A bare name or prefix application is a predicate, not a term.
    if (lhs->is_variable()) return Formula::predicate(lhs->name());
    if (lhs->is_application()) {
      return Formula::predicate(lhs->name(), {lhs->args().begin(), lhs->args().end()});
    }
    return std::nullopt;
  }
  const Token& op = tokens[pos];
  const bool eq = is_symbol(op, "=");
  const bool neq = is_symbol(op, "≠") || is_symbol(op, "!=");
  if (!eq && !neq) return std::nullopt;
  ++pos;
  auto rhs = parse_term(tokens, pos);
  if (!rhs || pos != tokens.size()) return std::nullopt;
  Formula f = Formula::equal(std::move(*lhs), std::move(*rhs));
  return neq ? Formula::negation(f) : f;
}

void render_term(const Term& t, std::vector<Token>& out) {
  out.push_back(Token{TokenKind::kWord, t.name()});
  if (t.is_application()) {
    out.push_back(Token{TokenKind::kSymbol, "("});
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out.push_back(Token{TokenKind::kComma, ","});
      render_term(t.args()[i], out);
    }
    out.push_back(Token{TokenKind::kSymbol, ")"});
  }
}

}  // namespace

NotationPattern parse_notation(const std::string& name, std::span<const Token> pattern,
                               SourceLocation where) {
  NotationPattern out;
  out.name = name;
  out.where = where;
  std::set<std::string> slots;
  bool has_literal = false;
  for (const auto& t : pattern) {
    if (t.kind == TokenKind::kWord) {
      if (!is_identifier(t.text) || is_keyword(t.text)) {
        throw ElfeError(Diagnostic{ErrorCode::kInvalidNotation, t.location(),
                                   fmt::format("'{}' cannot appear in a notation", t.text)});
      }
      if (!slots.insert(t.text).second) {
        throw ElfeError(Diagnostic{
            ErrorCode::kDuplicateSlot, t.location(),
            fmt::format("slot '{}' appears twice in notation '{}'", t.text, name)});
      }
      out.elements.push_back({true, {}});
    } else {
      has_literal = true;
      out.elements.push_back({false, t.text});
    }
  }
  out.arity = slots.size();
  if (!has_literal || out.arity == 0) {
    throw ElfeError(Diagnostic{ErrorCode::kInvalidNotation, where,
                               fmt::format("notation '{}' needs at least one symbol and one "
                                           "argument slot",
                                           name)});
  }
  return out;
}

NotationScope::NotationScope() : patterns_(std::make_shared<const std::vector<NotationPattern>>()) {}

NotationScope NotationScope::with(const NotationPattern& pattern) const {
  for (const auto& p : *patterns_) {
    if (p.same_as(pattern)) return *this;
    if (p.name == pattern.name && p.arity != pattern.arity) {
      throw ElfeError(Diagnostic{
          ErrorCode::kConflictingNotation, pattern.where,
          fmt::format("notation '{}' was declared with {} arguments, now {}", pattern.name,
                      p.arity, pattern.arity)});
    }
  }
  auto next = std::make_shared<std::vector<NotationPattern>>(*patterns_);
  next->push_back(pattern);
  NotationScope scope;
  scope.patterns_ = std::move(next);
  return scope;
}

std::optional<std::size_t> NotationScope::arity_of(const std::string& name) const {
  for (const auto& p : *patterns_) {
    if (p.name == name) return p.arity;
  }
  return std::nullopt;
}

Formula match_atom(const AtomSpan& span, const NotationScope& scope) {
  std::vector<const NotationPattern*> ordered;
  for (const auto& p : scope.patterns()) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->elements.size() > b->elements.size();
  });

  std::size_t i = 0;
  while (i < ordered.size()) {
    const std::size_t count = ordered[i]->elements.size();
    const NotationPattern* winner = nullptr;
    std::vector<Term> winner_args;
    for (; i < ordered.size() && ordered[i]->elements.size() == count; ++i) {
      auto args = match_pattern(*ordered[i], span.tokens);
      if (!args) continue;
      if (winner && !winner->same_as(*ordered[i])) {
        throw ElfeError(Diagnostic{
            ErrorCode::kAmbiguousMatch, span.where,
            fmt::format("'{}' matches both notation '{}' and '{}'", span.text(), winner->name,
                        ordered[i]->name)});
      }
      if (!winner) {
        winner = ordered[i];
        winner_args = std::move(*args);
      }
    }
    if (winner) return Formula::predicate(winner->name, std::move(winner_args));
  }

  if (auto f = match_fallback(span.tokens)) return *f;
  throw ElfeError(Diagnostic{ErrorCode::kUnmatchedAtom, span.where,
                             fmt::format("cannot read '{}' as a proposition", span.text())});
}

std::vector<Token> render(const NotationPattern& pattern, std::span<const Term> args) {
  std::vector<Token> out;
  std::size_t next = 0;
  for (const auto& e : pattern.elements) {
    if (e.slot) {
      const Term& t = args[next++];
      if (t.is_application()) {
        out.push_back(Token{TokenKind::kSymbol, "("});
        render_term(t, out);
        out.push_back(Token{TokenKind::kSymbol, ")"});
      } else {
        render_term(t, out);
      }
    } else {
      const bool unicode = static_cast<unsigned char>(e.literal.front()) >= 0x80;
      out.push_back(Token{unicode ? TokenKind::kUnicodeOp : TokenKind::kSymbol, e.literal});
    }
  }
  return out;
}

}  // namespace elfe
