#ifndef ELFE_LEXER_HPP_
#define ELFE_LEXER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "elfe/error.hpp"

namespace elfe {

enum class TokenKind { kWord, kSymbol, kPeriod, kColon, kComma, kUnicodeOp };

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;
  int column = 1;
  // Set on the dot closing a quantifier prefix such as "for all a,b." where
  // it does not end the sentence.
  bool quantifier_dot = false;

  SourceLocation location() const { return {line, column}; }
  bool is_word(std::string_view w) const { return kind == TokenKind::kWord && text == w; }
  bool is(TokenKind k) const { return kind == k; }
};

// Splits UTF-8 source into tokens. Columns count code points, starting at 1.
// Multi-character operators (`|-|`, `||`, `<=`, ...) are matched maximally;
// each mathematical Unicode code point is one kUnicodeOp token.
// Throws ElfeError(kInvalidCharacter) on anything else.
std::vector<Token> tokenize(std::string_view source);

bool is_identifier(std::string_view text);

}  // namespace elfe

#endif  // ELFE_LEXER_HPP_
