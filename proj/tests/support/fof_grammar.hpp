#ifndef ELFE_TESTS_FOF_GRAMMAR_HPP_
#define ELFE_TESTS_FOF_GRAMMAR_HPP_

// Recognizer for the FOF part of the TPTP syntax, written from the grammar
// and sharing no code with the library's TPTP reader.
//
//   file      ::= (fof(name, role, formula).)*
//   formula   ::= unitary <=> unitary | unitary => unitary | unitary <= unitary
//               | unitary <~> unitary | unitary ~| unitary | unitary ~& unitary
//               | unitary (& unitary)+ | unitary (| unitary)+ | unitary
//   unitary   ::= ! [vars] : unitary | ? [vars] : unitary | ~ unitary
//               | ( formula ) | atom
//   atom      ::= $true | $false | term (= | !=) term | plain_term
//
// Every formula must also be closed.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace elfe::testing {

class FofRecognizer {
 public:
  explicit FofRecognizer(std::string_view text) : text_(text) {}

  // Empty string when well-formed, else a message with the offset.
  std::string check() {
    try {
      lex();
      while (peek().kind != K::kEnd) annotated();
      return {};
    } catch (const std::string& message) {
      return message;
    }
  }

 private:
  enum class K { kLower, kUpper, kDollar, kInteger, kQuoted, kPunct, kEnd };
  struct Tok {
    K kind;
    std::string text;
    std::size_t at;
  };

  void fail(const std::string& what) const {
    throw std::string(what + " at offset " + std::to_string(toks_[pos_].at) + " near '" +
                      toks_[pos_].text + "'");
  }

  void lex() {
    std::size_t i = 0;
    auto word = [&](std::size_t start) {
      while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) ++i;
      return std::string(text_.substr(start, i - start));
    };
    while (i < text_.size()) {
      char ch = text_[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
      } else if (ch == '%') {
        while (i < text_.size() && text_[i] != '\n') ++i;
      } else if (std::islower(static_cast<unsigned char>(ch))) {
        std::size_t s = i;
        toks_.push_back({K::kLower, word(s), s});
      } else if (std::isupper(static_cast<unsigned char>(ch))) {
        std::size_t s = i;
        toks_.push_back({K::kUpper, word(s), s});
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t s = i;
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        toks_.push_back({K::kInteger, std::string(text_.substr(s, i - s)), s});
      } else if (ch == '$') {
        std::size_t s = i++;
        std::string w = word(i);
        if (w.empty()) throw std::string("bad $word at offset " + std::to_string(s));
        toks_.push_back({K::kDollar, "$" + w, s});
      } else if (ch == '\'') {
        std::size_t s = i++;
        while (i < text_.size() && text_[i] != '\'') {
          if (text_[i] == '\\') ++i;
          ++i;
        }
        if (i >= text_.size()) throw std::string("unterminated quote at offset " + std::to_string(s));
        ++i;
        toks_.push_back({K::kQuoted, std::string(text_.substr(s, i - s)), s});
      } else {
        static const char* const kOps[] = {"<=>", "<~>", "=>", "<=", "~|", "~&", "!=",
                                           "!", "?", "~", "&", "|", "=", "(", ")",
                                           "[", "]", ",", ":", "."};
        bool found = false;
        for (const char* op : kOps) {
          if (text_.substr(i).starts_with(op)) {
            toks_.push_back({K::kPunct, op, i});
            i += std::string_view(op).size();
            found = true;
            break;
          }
        }
        if (!found) throw std::string("invalid character at offset " + std::to_string(i));
      }
    }
    toks_.push_back({K::kEnd, "<end>", text_.size()});
  }

  const Tok& peek() const { return toks_[pos_]; }
  bool is(const char* punct) const { return peek().kind == K::kPunct && peek().text == punct; }
  void expect(const char* punct) {
    if (!is(punct)) fail(std::string("expected '") + punct + "'");
    ++pos_;
  }

  void annotated() {
    if (!(peek().kind == K::kLower && peek().text == "fof")) fail("expected fof");
    ++pos_;
    expect("(");
    if (peek().kind != K::kLower && peek().kind != K::kInteger && peek().kind != K::kQuoted) fail("bad name");
    ++pos_;
    expect(",");
    static const std::set<std::string> kRoles{"axiom",   "hypothesis", "definition", "assumption",
                                              "lemma",   "theorem",    "corollary",  "conjecture",
                                              "negated_conjecture", "plain", "unknown"};
    if (peek().kind != K::kLower || !kRoles.contains(peek().text)) fail("bad role");
    ++pos_;
    expect(",");
    bound_.clear();
    formula();
    expect(")");
    expect(".");
  }

  void formula() {
    unitary();
    static const char* const kBinary[] = {"<=>", "=>", "<=", "<~>", "~|", "~&"};
    for (const char* op : kBinary) {
      if (is(op)) {
        ++pos_;
        unitary();
        return;
      }
    }
    for (const char* op : {"&", "|"}) {
      if (is(op)) {
        while (is(op)) {
          ++pos_;
          unitary();
        }
        return;
      }
    }
  }

  void unitary() {
    if (is("!") || is("?")) {
      ++pos_;
      expect("[");
      std::vector<std::string> vars;
      do {
        if (peek().kind != K::kUpper) fail("expected variable");
        vars.push_back(peek().text);
        ++pos_;
      } while (is(",") && (++pos_, true));
      expect("]");
      expect(":");
      for (const auto& v : vars) bound_.push_back(v);
      unitary();
      bound_.resize(bound_.size() - vars.size());
    } else if (is("~")) {
      ++pos_;
      unitary();
    } else if (is("(")) {
      ++pos_;
      formula();
      expect(")");
    } else {
      atom();
    }
  }

  void atom() {
    if (peek().kind == K::kDollar) {
      if (peek().text != "$true" && peek().text != "$false") fail("unknown defined word");
      ++pos_;
      return;
    }
    bool plain = peek().kind == K::kLower || peek().kind == K::kQuoted;
    term();
    if (is("=") || is("!=")) {
      ++pos_;
      term();
    } else if (!plain) {
      fail("variable used as a formula");
    }
  }

  void term() {
    if (peek().kind == K::kUpper) {
      bool known = false;
      for (const auto& v : bound_) known |= v == peek().text;
      if (!known) fail("free variable");
      ++pos_;
      return;
    }
    if (peek().kind != K::kLower && peek().kind != K::kQuoted) fail("expected term");
    ++pos_;
    if (is("(")) {
      ++pos_;
      term();
      while (is(",")) {
        ++pos_;
        term();
      }
      expect(")");
    }
  }

  std::string_view text_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

inline std::string fof_errors(std::string_view text) { return FofRecognizer(text).check(); }

}  // namespace elfe::testing

#endif  // ELFE_TESTS_FOF_GRAMMAR_HPP_
