#include "elfe/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <fmt/format.h>

#include "elfe/error.hpp"

namespace elfe {

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c == '_'; }

std::string escape(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_') {
      out += "__";
    } else if (c == '\'') {
      out += "_prime";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] != '_') {
      out += word[i];
    } else if (i + 1 < word.size() && word[i + 1] == '_') {
      out += '_';
      ++i;
    } else if (word.substr(i + 1, 5) == "prime") {
      out += '\'';
      i += 5;
    } else {
      out += '_';
    }
  }
  return out;
}

// Escaped text after "q_" starts with `_` only for `__` or `_prime`, so a `u`
// marks a prefixed name whose escape does not start with a letter or digit.
std::string prefixed(char q, std::string_view name) {
  std::string body = escape(name);
  std::string out{q, '_'};
  if (body.empty() || !(is_upper(body[0]) || is_digit(body[0]))) out += 'u';
  return out + body;
}

std::size_t prefix_length(std::string_view word, char q) {
  if (word.size() < 3 || word[0] != q || word[1] != '_') return 0;
  if (is_upper(word[2]) || is_digit(word[2])) return 2;
  return word[2] == 'u' ? 3 : 0;
}

}  // namespace

std::string tptp_functor(std::string_view name) {
  if (!name.empty() && is_lower(name.front())) return escape(name);
  return prefixed('q', name);
}

std::string tptp_variable(std::string_view name) {
  if (!name.empty() && is_lower(name.front())) {
    std::string out = escape(name);
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  }
  return prefixed('Q', name);
}

std::string from_tptp_functor(std::string_view word) {
  if (std::size_t n = prefix_length(word, 'q')) return unescape(word.substr(n));
  return unescape(word);
}

std::string from_tptp_variable(std::string_view word) {
  if (std::size_t n = prefix_length(word, 'Q')) return unescape(word.substr(n));
  std::string out = unescape(word);
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

namespace {

std::string term_text(const Term& t) {
  if (t.is_variable()) return tptp_variable(t.name());
  std::string out = tptp_functor(t.name());
  if (t.is_application()) {
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ',';
      out += term_text(t.args()[i]);
    }
    out += ')';
  }
  return out;
}

void write(const Formula& f, std::string& out);

// Operands of binary connectives: quantified and negated formulas get
// parentheses so no precedence rules are needed when reading back.
void write_operand(const Formula& f, std::string& out) {
  if (f.is_atom() || f.is_binary() || f.kind() == Formula::Kind::kFalsum) {
    write(f, out);
  } else {
    out += '(';
    write(f, out);
    out += ')';
  }
}

void write(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kPredicate:
      out += tptp_functor(f.name());
      if (!f.terms().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ',';
          out += term_text(f.terms()[i]);
        }
        out += ')';
      }
      return;
    case K::kEqual:
      out += term_text(f.terms()[0]) + " = " + term_text(f.terms()[1]);
      return;
    case K::kFalsum:
      out += "$false";
      return;
    case K::kNot:
      if (f.operand().kind() == K::kEqual) {
        out += term_text(f.operand().terms()[0]) + " != " + term_text(f.operand().terms()[1]);
        return;
      }
      out += "~ ";
      write_operand(f.operand(), out);
      return;
    case K::kAnd:
    case K::kOr:
    case K::kImplies:
    case K::kIff: {
      static const std::map<K, const char*> ops{
          {K::kAnd, " & "}, {K::kOr, " | "}, {K::kImplies, " => "}, {K::kIff, " <=> "}};
      out += '(';
      write_operand(f.left(), out);
      out += ops.at(f.kind());
      write_operand(f.right(), out);
      out += ')';
      return;
    }
    case K::kForall:
    case K::kExists: {
      out += f.kind() == K::kForall ? "![" : "?[";
      for (std::size_t i = 0; i < f.vars().size(); ++i) {
        if (i) out += ',';
        out += tptp_variable(f.vars()[i]);
      }
      out += "]: ";
      write_operand(f.operand(), out);
      return;
    }
  }
}

std::string closed_text(const Formula& f) {
  auto free = free_vars_ordered(f);
  return to_tptp(free.empty() ? f : Formula::forall(free, f));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string to_tptp(const Formula& f) {
  std::string out;
  write(f, out);
  return out;
}

std::string to_tptp(const Obligation& ob) {
  struct Entry {
    std::string label;
    const ContextPremise* premise;
  };
  std::vector<Entry> entries;
  for (const auto& p : ob.premises) {
    entries.push_back({tptp_functor(lower(p.label.empty() ? "premise" : p.label)), &p});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.label < b.label; });
  std::set<std::string> taken{"goal"};
  std::string out = fmt::format("% {}\n", ob.id);
  for (auto& e : entries) {
    std::string label = e.label;
    for (int k = 2; taken.contains(label); ++k) label = fmt::format("{}_{}", e.label, k);
    taken.insert(label);
    out += fmt::format("fof({}, axiom, {}).\n", label, closed_text(e.premise->formula));
  }
  out += fmt::format("fof(goal, conjecture, {}).\n", closed_text(ob.goal));
  return out;
}

namespace {

class TptpParser {
 public:
  explicit TptpParser(std::string_view text) : text_(text) {}

  std::vector<TptpStatement> run() {
    std::vector<TptpStatement> out;
    skip();
    while (pos_ < text_.size()) {
      expect_word("fof");
      expect("(");
      TptpStatement st;
      st.name = name();
      expect(",");
      st.role = lower_word();
      static const std::set<std::string> roles{"axiom",      "hypothesis", "definition",
                                               "assumption", "lemma",      "theorem",
                                               "corollary",  "conjecture", "negated_conjecture"};
      if (!roles.contains(st.role)) fail("unknown formula role '" + st.role + "'");
      expect(",");
      st.formula = logic();
      expect(")");
      expect(".");
      out.push_back(std::move(st));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ElfeError(Diagnostic{ErrorCode::kSyntaxError, {line, column}, "tptp: " + message});
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (text_.substr(pos_, 2) == "/*") {
        auto end = text_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 2;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    skip();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail(fmt::format("expected '{}'", s));
  }

  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_alnum(text_[pos_])) ++pos_;
    std::string out(text_.substr(start, pos_ - start));
    skip();
    return out;
  }

  std::string lower_word() {
    if (pos_ >= text_.size() || !is_lower(text_[pos_])) fail("expected a lower word");
    return word();
  }

  void expect_word(std::string_view w) {
    if (lower_word() != w) fail(fmt::format("expected '{}'", w));
  }

  std::string name() {
    if (pos_ < text_.size() && (is_lower(text_[pos_]) || is_digit(text_[pos_]))) return word();
    if (peek("'")) {
      auto end = text_.find('\'', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated quoted name");
      std::string out(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      skip();
      return out;
    }
    fail("expected a formula name");
  }

  // logic ::= unit (binop unit | (& unit)+ | (| unit)+)?
  Formula logic() {
    Formula left = unit();
    if (peek("&")) {
      while (accept("&")) left = Formula::conjunction(left, unit());
      if (peek("|") || peek("=>") || peek("<=")) fail("mixed connectives need parentheses");
      return left;
    }
    if (peek("|")) {
      while (accept("|")) left = Formula::disjunction(left, unit());
      if (peek("&") || peek("=>") || peek("<=")) fail("mixed connectives need parentheses");
      return left;
    }
    if (accept("<=>")) return Formula::equivalence(left, unit());
    if (accept("=>")) return Formula::implication(left, unit());
    if (accept("<~>")) return Formula::negation(Formula::equivalence(left, unit()));
    if (accept("<=")) return Formula::implication(unit(), left);
    if (accept("~|")) return Formula::negation(Formula::disjunction(left, unit()));
    if (accept("~&")) return Formula::negation(Formula::conjunction(left, unit()));
    return left;
  }

  Formula unit() {
    if (peek("~|") || peek("~&")) fail("binary connective without left operand");
    if (accept("~")) return Formula::negation(unit());
    if (peek("!") && !peek("!=")) return quantified(true);
    if (peek("?")) return quantified(false);
    if (accept("(")) {
      Formula f = logic();
      expect(")");
      return f;
    }
    if (accept("$false")) return Formula::falsum();
    if (accept("$true")) return Formula::negation(Formula::falsum());
    return atomic();
  }

  Formula quantified(bool universal) {
    ++pos_;
    skip();
    expect("[");
    std::vector<std::string> vars;
    do {
      if (pos_ >= text_.size() || !is_upper(text_[pos_])) fail("expected a variable");
      std::string v = word();
      if (!bound_.contains(v)) bound_[v] = 0;
      ++bound_[v];
      vars.push_back(v);
    } while (accept(","));
    expect("]");
    expect(":");
    Formula body = unit();
    for (const auto& v : vars) --bound_[v];
    std::vector<std::string> names;
    for (const auto& v : vars) names.push_back(from_tptp_variable(v));
    return universal ? Formula::forall(names, body) : Formula::exists(names, body);
  }

  Formula atomic() {
    if (pos_ < text_.size() && is_upper(text_[pos_])) {
      Term l = term();
      return equality(l);
    }
    if (pos_ >= text_.size() || !is_lower(text_[pos_])) fail("expected an atomic formula");
    std::string head = word();
    std::vector<Term> args;
    if (accept("(")) {
      do {
        args.push_back(term());
      } while (accept(","));
      expect(")");
    }
    if ((peek("=") && !peek("=>")) || peek("!=")) {
      Term l = args.empty() ? Term::constant(from_tptp_functor(head))
                            : Term::apply(from_tptp_functor(head), std::move(args));
      return equality(l);
    }
    return Formula::predicate(from_tptp_functor(head), std::move(args));
  }

  Formula equality(const Term& l) {
    if (accept("!=")) return Formula::negation(Formula::equal(l, term()));
    if (accept("=")) return Formula::equal(l, term());
    fail("expected '=' or '!='");
  }

  Term term() {
    if (pos_ < text_.size() && is_upper(text_[pos_])) {
      std::string v = word();
      if (!bound_.contains(v) || bound_[v] == 0) fail("unbound variable " + v);
      return Term::variable(from_tptp_variable(v));
    }
    if (pos_ >= text_.size() || !(is_lower(text_[pos_]) || is_digit(text_[pos_]))) {
      fail("expected a term");
    }
    std::string head = word();
    if (!accept("(")) return Term::constant(from_tptp_functor(head));
    std::vector<Term> args;
    do {
      args.push_back(term());
    } while (accept(","));
    expect(")");
    return Term::apply(from_tptp_functor(head), std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, int> bound_;
};

}  // namespace

std::vector<TptpStatement> parse_tptp(std::string_view text) { return TptpParser(text).run(); }

}  // namespace elfe
