#include "elfe/lexer.hpp"

#include <array>
#include <fmt/format.h>

namespace elfe {

namespace {

// Longest first so that maximal munch is a linear scan.
constexpr std::array<std::string_view, 9> kMultiCharSymbols = {
    "<->", "<=>", "|-|", "||", "<=", ">=", "!=", "->", "=>",
};

constexpr std::string_view kSingleCharSymbols = "()[]{}+-*/=<>|&!~^;?@%";

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ascii_letter(c) || is_digit(c) || c == '\'' || c == '_'; }

bool is_math_codepoint(char32_t cp) {
  return (cp >= 0x2190 && cp <= 0x22FF) || (cp >= 0x27C0 && cp <= 0x27FF) ||
         (cp >= 0x2980 && cp <= 0x2AFF) || cp == 0x00AC || cp == 0x00B1 || cp == 0x00B7 ||
         cp == 0x00D7 || cp == 0x00F7 || cp == 0x2016 || cp == 0x2225 || cp == 0x2226;
}

// Returns the code point at `pos` and its byte length, or length 0 when the
// bytes are not well-formed UTF-8.
std::pair<char32_t, std::size_t> decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0, 0};
  }
  if (pos + len > s.size()) return {0, 0};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_quantifier_start(const std::vector<Token>& tokens, std::size_t i, std::size_t& next) {
  if (tokens[i].is_word("exists")) {
    next = i + 1;
    return true;
  }
  if (tokens[i].is_word("for") && i + 1 < tokens.size() && tokens[i + 1].is_word("all")) {
    next = i + 2;
    return true;
  }
  return false;
}

// A dot is a quantifier dot iff the tokens since the nearest `for all` /
// `exists` form a comma-separated identifier list.
void mark_quantifier_dots(std::vector<Token>& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t j = 0;
    if (!is_quantifier_start(tokens, i, j)) continue;
    bool expect_name = true;
    while (j < tokens.size()) {
      const Token& t = tokens[j];
      if (expect_name) {
        if (t.kind != TokenKind::kWord || !is_identifier(t.text)) break;
        expect_name = false;
      } else if (t.is(TokenKind::kComma)) {
        expect_name = true;
      } else {
        if (t.is(TokenKind::kPeriod)) tokens[j].quantifier_dot = true;
        break;
      }
      ++j;
    }
  }
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_ascii_letter(text.front())) return false;
  for (char c : text) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;
  if (source.starts_with("\xEF\xBB\xBF")) pos = 3;

  auto invalid = [&](std::string what) {
    throw ElfeError(Diagnostic{ErrorCode::kInvalidCharacter, {line, column}, std::move(what)});
  };
  auto push = [&](TokenKind kind, std::string text, int width) {
    tokens.push_back(Token{kind, std::move(text), line, column});
    column += width;
  };

  while (pos < source.size()) {
    const char c = source[pos];
    if (c == '\n') {
      ++line;
      column = 1;
      ++pos;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++column;
      ++pos;
      continue;
    }
    if (is_ascii_letter(c) || is_digit(c)) {
      std::size_t end = pos + 1;
      const bool numeral = is_digit(c);
      while (end < source.size() &&
             (numeral ? is_digit(source[end]) : is_ident_char(source[end]))) {
        ++end;
      }
      const int width = static_cast<int>(end - pos);
      push(TokenKind::kWord, std::string(source.substr(pos, end - pos)), width);
      pos = end;
      continue;
    }
    if (c == '.') {
      push(TokenKind::kPeriod, ".", 1);
      ++pos;
      continue;
    }
    if (c == ':') {
      push(TokenKind::kColon, ":", 1);
      ++pos;
      continue;
    }
    if (c == ',') {
      push(TokenKind::kComma, ",", 1);
      ++pos;
      continue;
    }
    if (static_cast<unsigned char>(c) < 0x80) {
      bool matched = false;
      for (auto sym : kMultiCharSymbols) {
        if (source.substr(pos).starts_with(sym)) {
          push(TokenKind::kSymbol, std::string(sym), static_cast<int>(sym.size()));
          pos += sym.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (kSingleCharSymbols.find(c) != std::string_view::npos) {
        push(TokenKind::kSymbol, std::string(1, c), 1);
        ++pos;
        continue;
      }
      invalid(fmt::format("unexpected character '{}'", c));
    }
    const auto [cp, len] = decode(source, pos);
    if (len == 0) invalid("malformed UTF-8");
    if (cp == 0x00A0 || cp == 0x2009 || cp == 0x202F || cp == 0xFEFF) {
      ++column;
      pos += len;
      continue;
    }
    if (!is_math_codepoint(cp)) {
      invalid(fmt::format("unexpected character U+{:04X}", static_cast<std::uint32_t>(cp)));
    }
    push(TokenKind::kUnicodeOp, std::string(source.substr(pos, len)), 1);
    pos += len;
  }
  mark_quantifier_dots(tokens);
  return tokens;
}

}  // namespace elfe
