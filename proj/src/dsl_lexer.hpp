#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tissuenet/dsl.hpp"

namespace tissuenet::dsl {

enum class Tok {
  ident,
  integer,
  string,
  newline,
  semicolon,
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  at,
  assign,  // :=
  equals,  // =
  eqeq,
  ne,
  lt,
  le,
  gt,
  ge,
  plus,
  minus,
  star,
  bang,
  andand,
  oror,
  dotdot,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier or decoded string contents
  long value = 0;    // integers
  SourcePos pos;
};

std::string describe(Tok kind);
std::string describe(const Token& tok);

/// Splits model text into tokens. Unknown characters are reported and skipped;
/// the result always ends with a Tok::end token.
std::vector<Token> lex(std::string_view text, std::vector<Diagnostic>& diagnostics);

}  // namespace tissuenet::dsl
