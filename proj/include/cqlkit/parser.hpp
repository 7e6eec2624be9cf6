#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqlkit/ast.hpp"

namespace cqlkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, std::string message);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string message_;
};

/// Parses one query. Throws ParseError on syntax errors, duplicate or
/// undeclared labels, bad quantifiers and values that do not compile as
/// regular expressions.
///
///   query     := seq ("within" (seq | structure))* ("::" cond ("&" cond)*)?
///   seq       := token+
///   token     := (label ":")? "[" or_expr? "]" quant?
///   or_expr   := and_expr ("|" and_expr)*
///   and_expr  := unary ("&" unary)*
///   unary     := "!" unary | "(" or_expr ")" | attr ("=" | "!=") literal
///   structure := "<" ident "/>"
///   cond      := label "." attr ("=" | "!=") label "." attr
Query parse(std::string_view source);

std::optional<Query> try_parse(std::string_view source);

/// Human-readable two-line diagnostic with a caret under the error offset.
std::string render_diagnostic(std::string_view source, const ParseError& err);

}  // namespace cqlkit
