#include "cqlkit/lexer.hpp"

#include "utf8.hpp"

namespace cqlkit {

const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::And: return "'&'";
    case TokenKind::Or: return "'|'";
    case TokenKind::Not: return "'!'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Neq: return "'!='";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::Ident: return "identifier";
    case TokenKind::LabelSep: return "':'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::WithinKw: return "'within'";
    case TokenKind::CondSep: return "'::'";
    case TokenKind::QuantQmark: return "'?'";
    case TokenKind::QuantStar: return "'*'";
    case TokenKind::QuantPlus: return "'+'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Number: return "number";
    case TokenKind::StructOpen: return "'<'";
    case TokenKind::StructSelfClose: return "'/>'";
    case TokenKind::Error: return "invalid character";
  }
  return "?";
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

}  // namespace

std::string decode_literal_body(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size()) {
      char next = body[i + 1];
      if (next == '"' || next == '\'') {
        out.push_back(next);
      } else {
        out.push_back('\\');
        out.push_back(next);
      }
      ++i;
      continue;
    }
    out.push_back(body[i]);
  }
  return out;
}

std::string quote_literal(std::string_view value) {
  std::string out = "\"";
  for (std::size_t i = 0; i < value.size(); ++i) {
    char c = value[i];
    if (c == '\\' && i + 1 < value.size()) {
      out.push_back('\\');
      out.push_back(value[++i]);
    } else if (c == '"') {
      out += "\\\"";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::vector<CqlToken> lex(std::string_view src) {
  std::vector<CqlToken> out;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.push_back(CqlToken{kind, std::string(src.substr(begin, end - begin)), Span{begin, end}, {}});
  };

  while (i < n) {
    char c = src[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    switch (c) {
      case '[': emit(TokenKind::LBracket, i, i + 1); ++i; continue;
      case ']': emit(TokenKind::RBracket, i, i + 1); ++i; continue;
      case '(': emit(TokenKind::LParen, i, i + 1); ++i; continue;
      case ')': emit(TokenKind::RParen, i, i + 1); ++i; continue;
      case '&': emit(TokenKind::And, i, i + 1); ++i; continue;
      case '|': emit(TokenKind::Or, i, i + 1); ++i; continue;
      case '=': emit(TokenKind::Eq, i, i + 1); ++i; continue;
      case '.': emit(TokenKind::Dot, i, i + 1); ++i; continue;
      case '?': emit(TokenKind::QuantQmark, i, i + 1); ++i; continue;
      case '*': emit(TokenKind::QuantStar, i, i + 1); ++i; continue;
      case '+': emit(TokenKind::QuantPlus, i, i + 1); ++i; continue;
      case '{': emit(TokenKind::LBrace, i, i + 1); ++i; continue;
      case '}': emit(TokenKind::RBrace, i, i + 1); ++i; continue;
      case ',': emit(TokenKind::Comma, i, i + 1); ++i; continue;
      case '<': emit(TokenKind::StructOpen, i, i + 1); ++i; continue;
      case '!':
        if (i + 1 < n && src[i + 1] == '=') {
          emit(TokenKind::Neq, i, i + 2);
          i += 2;
        } else {
          emit(TokenKind::Not, i, i + 1);
          ++i;
        }
        continue;
      case ':':
        if (i + 1 < n && src[i + 1] == ':') {
          emit(TokenKind::CondSep, i, i + 2);
          i += 2;
        } else {
          emit(TokenKind::LabelSep, i, i + 1);
          ++i;
        }
        continue;
      case '/':
        if (i + 1 < n && src[i + 1] == '>') {
          emit(TokenKind::StructSelfClose, i, i + 2);
          i += 2;
        } else {
          emit(TokenKind::Error, i, i + 1);
          ++i;
        }
        continue;
      case '"':
      case '\'': {
        std::size_t j = i + 1;
        bool closed = false;
        while (j < n) {
          if (src[j] == '\\' && j + 1 < n) {
            j += 2;
            continue;
          }
          if (src[j] == c) {
            closed = true;
            break;
          }
          ++j;
        }
        if (!closed) {
          // Unterminated literal: the rest of the input is one error token.
          emit(TokenKind::Error, i, n);
          i = n;
          continue;
        }
        emit(TokenKind::StringLiteral, i, j + 1);
        out.back().value = decode_literal_body(src.substr(i + 1, j - i - 1));
        i = j + 1;
        continue;
      }
      default:
        break;
    }
    if (is_digit(c)) {
      while (i < n && is_digit(src[i])) ++i;
      emit(TokenKind::Number, start, i);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(src[i])) ++i;
      auto word = src.substr(start, i - start);
      emit(word == "within" ? TokenKind::WithinKw : TokenKind::Ident, start, i);
      continue;
    }
    i += utf8::sequence_length(src, i);
    emit(TokenKind::Error, start, i);
  }
  return out;
}

}  // namespace cqlkit
