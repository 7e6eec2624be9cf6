#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cqlkit {

enum class TokenKind {
  LBracket,
  RBracket,
  LParen,
  RParen,
  And,
  Or,
  Not,
  Eq,
  Neq,
  StringLiteral,
  Ident,
  LabelSep,     // ":"
  Dot,
  WithinKw,
  CondSep,      // "::"
  QuantQmark,
  QuantStar,
  QuantPlus,
  LBrace,
  RBrace,
  Comma,
  Number,
  StructOpen,   // "<"
  StructSelfClose,  // "/>"
  Error,
};

const char* to_string(TokenKind k);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive byte offset
};

struct CqlToken {
  TokenKind kind;
  std::string text;   // exact source slice
  Span span;
  std::string value;  // decoded literal body, StringLiteral only
};

/// Splits `source` into tokens. Bytes that start no valid token become
/// Error tokens (one per UTF-8 code point); lexing never stops early.
std::vector<CqlToken> lex(std::string_view source);

/// Decodes the body of a quoted literal. `\q` for either quote character
/// becomes the bare quote; every other escape pair is kept verbatim so it
/// reaches the regex engine unchanged.
std::string decode_literal_body(std::string_view body);

/// Inverse of decode_literal_body for a double-quoted rendering.
std::string quote_literal(std::string_view value);

}  // namespace cqlkit
