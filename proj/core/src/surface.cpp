#include "elfe/surface.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <fmt/format.h>

namespace elfe {

namespace {

constexpr std::array<std::string_view, 26> kKeywords = {
    "Include", "Notation", "Definition", "Axiom", "Lemma", "Proof",    "qed",
    "Assume",  "Then",     "Hence",      "Note",  "Case",  "Take",     "since",
    "by",      "such",     "that",       "for",   "all",   "exists",   "implies",
    "iff",     "and",      "or",         "not",   "contradiction",
};

// Words that end an atom span at nesting depth 0.
constexpr std::array<std::string_view, 9> kAtomStoppers = {
    "and", "or", "implies", "iff", "since", "by", "not", "for", "exists",
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {}

  RawDocument document() {
    RawDocument doc;
    std::set<std::string> labels;
    int unlabeled = 0;
    while (!at_end()) {
      RawItem item = top_level_item(unlabeled);
      if (item.kind != RawItem::Kind::kInclude && !labels.insert(item.label).second) {
        throw ElfeError(Diagnostic{ErrorCode::kDuplicateLabel, item.where,
                                   fmt::format("label '{}' is already declared", item.label)});
      }
      doc.items.push_back(std::move(item));
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  bool peek_word(std::string_view w, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->is_word(w);
  }
  bool peek_kind(TokenKind k) const {
    const Token* t = peek();
    return t && t->is(k);
  }
  bool peek_sentence_end() const {
    const Token* t = peek();
    return t && t->is(TokenKind::kPeriod) && !t->quantifier_dot;
  }

  SourceLocation here() const {
    if (const Token* t = peek()) return t->location();
    if (tokens_.empty()) return {1, 1};
    const Token& last = tokens_.back();
    return {last.line, last.column + static_cast<int>(last.text.size())};
  }

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
    std::vector<std::string> names;
    for (auto e : expected) names.emplace_back(fmt::format("'{}'", e));
    const Token* t = peek();
    std::string found = t ? fmt::format("'{}'", t->text) : std::string("end of input");
    throw ElfeError(Diagnostic{ErrorCode::kSyntaxError, here(),
                               fmt::format("expected {}; found {}", join(names, " or "), found)});
  }

  const Token& expect_word(std::string_view w) {
    if (!peek_word(w)) fail({w});
    return tokens_[pos_++];
  }

  void expect_kind(TokenKind k, std::string_view display) {
    if (!peek_kind(k)) fail({display});
    ++pos_;
  }

  void expect_sentence_end() {
    if (!peek_sentence_end()) fail({"."});
    ++pos_;
  }

  std::string identifier(std::string_view what) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::kWord || !is_identifier(t->text) || is_keyword(t->text)) {
      fail({what});
    }
    ++pos_;
    return t->text;
  }

  std::vector<std::string> identifier_list(std::string_view what) {
    std::vector<std::string> out{identifier(what)};
    while (peek_kind(TokenKind::kComma)) {
      ++pos_;
      out.push_back(identifier(what));
    }
    return out;
  }

  RawItem top_level_item(int& unlabeled) {
    RawItem item;
    item.where = here();
    if (peek_word("Include")) {
      ++pos_;
      item.kind = RawItem::Kind::kInclude;
      item.label = identifier("library name");
      expect_sentence_end();
      return item;
    }
    if (peek_word("Notation")) {
      ++pos_;
      item.kind = RawItem::Kind::kNotation;
      item.label = identifier("notation name");
      expect_kind(TokenKind::kColon, ":");
      while (!at_end() && !peek_sentence_end()) item.pattern.push_back(tokens_[pos_++]);
      if (item.pattern.empty()) fail({"notation pattern"});
      expect_sentence_end();
      return item;
    }
    if (peek_word("Definition") || peek_word("Axiom")) {
      item.kind = peek_word("Axiom") ? RawItem::Kind::kAxiom : RawItem::Kind::kDefinition;
      ++pos_;
      item.label = identifier("label");
      expect_kind(TokenKind::kColon, ":");
      item.sentence = sentence();
      expect_sentence_end();
      return item;
    }
    if (peek_word("Lemma")) {
      ++pos_;
      item.kind = RawItem::Kind::kLemma;
      if (peek_kind(TokenKind::kColon)) {
        item.label = fmt::format("__lemma{}", ++unlabeled);
        item.auto_label = true;
      } else {
        item.label = identifier("label");
      }
      expect_kind(TokenKind::kColon, ":");
      item.sentence = sentence();
      expect_sentence_end();
      if (peek_word("Proof")) item.proof = proof();
      return item;
    }
    fail({"Include", "Notation", "Definition", "Axiom", "Lemma"});
  }

  RawProof proof() {
    RawProof p;
    p.where = here();
    expect_word("Proof");
    expect_kind(TokenKind::kColon, ":");
    p.steps = steps_until_qed(p.where, p.closed_at);
    return p;
  }

  std::vector<RawStep> steps_until_qed(SourceLocation opened_at, SourceLocation& closed_at) {
    std::vector<RawStep> steps;
    while (true) {
      if (at_end()) {
        throw ElfeError(Diagnostic{ErrorCode::kUnclosedBlock, opened_at,
                                   "block opened here is not closed by 'qed.'"});
      }
      if (peek_word("qed")) {
        closed_at = here();
        ++pos_;
        expect_sentence_end();
        return steps;
      }
      steps.push_back(step());
    }
  }

  void derivation_clauses(RawStep& s) {
    while (true) {
      if (peek_word("since") && !s.since) {
        ++pos_;
        s.since = sentence();
      } else if (peek_word("by") && !s.by) {
        ++pos_;
        s.by = identifier_list("label");
      } else {
        return;
      }
    }
  }

  RawStep step() {
    RawStep s;
    s.where = here();
    if (peek_word("Assume")) {
      ++pos_;
      s.kind = RawStep::Kind::kAssume;
      s.sentence = sentence();
      expect_sentence_end();
      return s;
    }
    if (peek_word("Then") || peek_word("Hence")) {
      s.kind = peek_word("Then") ? RawStep::Kind::kThen : RawStep::Kind::kHence;
      ++pos_;
      s.sentence = sentence();
      derivation_clauses(s);
      expect_sentence_end();
      return s;
    }
    if (peek_word("Note") || peek_word("Case")) {
      s.kind = peek_word("Note") ? RawStep::Kind::kNote : RawStep::Kind::kCase;
      ++pos_;
      s.sentence = sentence();
      expect_kind(TokenKind::kColon, ":");
      s.steps = steps_until_qed(s.where, s.closed_at);
      return s;
    }
    if (peek_word("Take")) {
      ++pos_;
      s.kind = RawStep::Kind::kTake;
      s.vars = identifier_list("variable");
      expect_word("such");
      expect_word("that");
      s.sentence = sentence();
      if (peek_word("by")) {
        ++pos_;
        s.by = identifier_list("label");
      }
      expect_sentence_end();
      return s;
    }
    fail({"Assume", "Then", "Hence", "Note", "Case", "Take", "qed"});
  }

  // sentence := iff
  RawSentence sentence() { return iff(); }

  RawSentence binary(RawSentence::Kind kind, RawSentence l, RawSentence r) {
    RawSentence s;
    s.kind = kind;
    s.where = l.where;
    s.children.push_back(std::move(l));
    s.children.push_back(std::move(r));
    return s;
  }

  RawSentence iff() {
    RawSentence l = implies();
    if (peek_word("iff")) {
      ++pos_;
      return binary(RawSentence::Kind::kIff, std::move(l), iff());
    }
    return l;
  }

  RawSentence implies() {
    RawSentence l = disjunction();
    if (peek_word("implies")) {
      ++pos_;
      return binary(RawSentence::Kind::kImplies, std::move(l), implies());
    }
    return l;
  }

  RawSentence disjunction() {
    RawSentence l = conjunction();
    while (peek_word("or")) {
      ++pos_;
      l = binary(RawSentence::Kind::kOr, std::move(l), conjunction());
    }
    return l;
  }

  RawSentence conjunction() {
    RawSentence l = unary();
    while (peek_word("and")) {
      ++pos_;
      l = binary(RawSentence::Kind::kAnd, std::move(l), unary());
    }
    return l;
  }

  bool is_stopper(const Token& t) const {
    if (t.kind == TokenKind::kWord) {
      return std::find(kAtomStoppers.begin(), kAtomStoppers.end(), t.text) != kAtomStoppers.end();
    }
    return t.is(TokenKind::kPeriod) || t.is(TokenKind::kColon) || t.is(TokenKind::kComma);
  }

  // Index just past the ')' matching the '(' at `open`, or npos.
  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind != TokenKind::kSymbol) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")" && --depth == 0) return i + 1;
    }
    return std::string::npos;
  }

  RawSentence unary() {
    RawSentence s;
    s.where = here();
    if (peek_word("not")) {
      ++pos_;
      s.kind = RawSentence::Kind::kNot;
      s.children.push_back(unary());
      return s;
    }
    if (peek_word("exists") || (peek_word("for") && peek_word("all", 1))) {
      s.kind = peek_word("exists") ? RawSentence::Kind::kExists : RawSentence::Kind::kForall;
      pos_ += s.kind == RawSentence::Kind::kExists ? 1 : 2;
      s.vars = identifier_list("variable");
      const Token* dot = peek();
      if (!dot || !dot->is(TokenKind::kPeriod)) fail({"."});
      ++pos_;
      s.children.push_back(sentence());
      return s;
    }
    const Token* t = peek();
    if (t && t->kind == TokenKind::kSymbol && t->text == "(") {
      const std::size_t after = matching_paren(pos_);
      const Token* follow = after < tokens_.size() ? &tokens_[after] : nullptr;
      const bool group_ends = !follow || is_stopper(*follow) ||
                              (follow->kind == TokenKind::kSymbol && follow->text == ")");
      if (after != std::string::npos && group_ends) {
        ++pos_;
        RawSentence inner = sentence();
        const Token* close = peek();
        if (!close || close->kind != TokenKind::kSymbol || close->text != ")") fail({")"});
        ++pos_;
        return inner;
      }
    }
    return atom();
  }

  RawSentence atom() {
    RawSentence s;
    s.kind = RawSentence::Kind::kAtom;
    s.where = here();
    s.atom.where = s.where;
    int depth = 0;
    while (!at_end()) {
      const Token& t = tokens_[pos_];
      if (depth == 0 && is_stopper(t)) break;
      if (t.kind == TokenKind::kSymbol && t.text == "(") ++depth;
      if (t.kind == TokenKind::kSymbol && t.text == ")") {
        if (depth == 0) break;
        --depth;
      }
      s.atom.tokens.push_back(t);
      ++pos_;
    }
    if (s.atom.tokens.empty()) fail({"proposition"});
    if (depth != 0) fail({")"});
    return s;
  }

  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
};

// --- printing --------------------------------------------------------------

std::string tokens_text(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

void print_sentence_into(const RawSentence& s, std::string& out) {
  auto child = [&](const RawSentence& c) {
    if (c.kind == RawSentence::Kind::kAtom) {
      print_sentence_into(c, out);
    } else {
      out += "( ";
      print_sentence_into(c, out);
      out += " )";
    }
  };
  switch (s.kind) {
    case RawSentence::Kind::kAtom:
      out += s.atom.text();
      return;
    case RawSentence::Kind::kNot:
      out += "not ";
      child(s.children[0]);
      return;
    case RawSentence::Kind::kForall:
    case RawSentence::Kind::kExists:
      out += s.kind == RawSentence::Kind::kForall ? "for all " : "exists ";
      out += join(s.vars, ", ");
      out += ". ";
      print_sentence_into(s.children[0], out);
      return;
    default: {
      std::string_view word = s.kind == RawSentence::Kind::kAnd       ? " and "
                              : s.kind == RawSentence::Kind::kOr      ? " or "
                              : s.kind == RawSentence::Kind::kImplies ? " implies "
                                                                      : " iff ";
      child(s.children[0]);
      out += word;
      child(s.children[1]);
      return;
    }
  }
}

void print_steps(const std::vector<RawStep>& steps, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& s : steps) {
    out += pad;
    switch (s.kind) {
      case RawStep::Kind::kAssume:
        out += "Assume " + print_sentence(s.sentence) + ".\n";
        break;
      case RawStep::Kind::kThen:
      case RawStep::Kind::kHence:
        out += s.kind == RawStep::Kind::kThen ? "Then " : "Hence ";
        out += print_sentence(s.sentence);
        if (s.since) out += " since " + print_sentence(*s.since);
        if (s.by) out += " by " + join(*s.by, ", ");
        out += ".\n";
        break;
      case RawStep::Kind::kNote:
      case RawStep::Kind::kCase:
        out += s.kind == RawStep::Kind::kNote ? "Note " : "Case ";
        out += print_sentence(s.sentence) + ":\n";
        print_steps(s.steps, indent + 1, out);
        out += pad + "qed.\n";
        break;
      case RawStep::Kind::kTake:
        out += "Take " + join(s.vars, ", ") + " such that " + print_sentence(s.sentence);
        if (s.by) out += " by " + join(*s.by, ", ");
        out += ".\n";
        break;
    }
  }
}

bool same_tokens(const std::vector<Token>& a, const std::vector<Token>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].text != b[i].text) return false;
  }
  return true;
}

bool same_optional(const std::optional<RawSentence>& a, const std::optional<RawSentence>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_structure(*a, *b);
}

bool same_steps(const std::vector<RawStep>& a, const std::vector<RawStep>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.kind != y.kind || x.by != y.by || x.vars != y.vars) return false;
    if (!same_structure(x.sentence, y.sentence) || !same_optional(x.since, y.since)) return false;
    if (!same_steps(x.steps, y.steps)) return false;
  }
  return true;
}

}  // namespace

std::string AtomSpan::text() const { return tokens_text(tokens); }

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

RawDocument parse_document(std::span<const Token> tokens) { return Parser(tokens).document(); }

RawDocument parse_document(std::string_view source) {
  const auto tokens = tokenize(source);
  return parse_document(tokens);
}

std::string print_sentence(const RawSentence& s) {
  std::string out;
  print_sentence_into(s, out);
  return out;
}

std::string print_document(const RawDocument& doc) {
  std::string out;
  for (const auto& item : doc.items) {
    switch (item.kind) {
      case RawItem::Kind::kInclude:
        out += "Include " + item.label + ".\n";
        break;
      case RawItem::Kind::kNotation:
        out += "Notation " + item.label + ": " + tokens_text(item.pattern) + ".\n";
        break;
      case RawItem::Kind::kDefinition:
      case RawItem::Kind::kAxiom:
        out += item.kind == RawItem::Kind::kAxiom ? "Axiom " : "Definition ";
        out += item.label + ": " + print_sentence(*item.sentence) + ".\n";
        break;
      case RawItem::Kind::kLemma:
        out += "Lemma";
        if (!item.auto_label) out += " " + item.label;
        out += ": " + print_sentence(*item.sentence) + ".\n";
        if (item.proof) {
          out += "Proof:\n";
          print_steps(item.proof->steps, 1, out);
          out += "qed.\n";
        }
        break;
    }
  }
  return out;
}

bool same_structure(const RawSentence& a, const RawSentence& b) {
  if (a.kind != b.kind || a.vars != b.vars || a.children.size() != b.children.size()) {
    return false;
  }
  if (a.kind == RawSentence::Kind::kAtom && !same_tokens(a.atom.tokens, b.atom.tokens)) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(a.children[i], b.children[i])) return false;
  }
  return true;
}

bool same_structure(const RawDocument& a, const RawDocument& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const auto& x = a.items[i];
    const auto& y = b.items[i];
    if (x.kind != y.kind || x.label != y.label || x.auto_label != y.auto_label) return false;
    if (!same_tokens(x.pattern, y.pattern) || !same_optional(x.sentence, y.sentence)) return false;
    if (x.proof.has_value() != y.proof.has_value()) return false;
    if (x.proof && !same_steps(x.proof->steps, y.proof->steps)) return false;
  }
  return true;
}

}  // namespace elfe
