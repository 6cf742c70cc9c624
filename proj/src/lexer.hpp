#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stipula/error.hpp"

namespace stipula::detail {

enum class Tok {
  Ident,
  Keyword,
  Int,
  String,
  State,  // @Name
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Comma, Semi, Colon,
  Send,      // ->
  Lolli,     // -o
  Schedule,  // >>
  Goto,      // =>
  Plus, Minus, Star, Slash,
  Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
};

std::string_view describe(Tok t);

std::vector<Token> lex(std::string_view source);

}  // namespace stipula::detail
