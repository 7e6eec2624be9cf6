#pragma once

#include <string>
#include <string_view>

#include "cqlkit/ast.hpp"

namespace cqlkit {

// Canonical rendering: double-quoted literals, single spaces between
// sequence elements, " & " / " | " between operands, quantifiers glued to
// their token. parse(canonical_print(q)) == q for every parsed q.
std::string canonical_print(const Query& q);
std::string canonical_print(const SeqExpr& seq);
std::string canonical_print(const TokenExpr& tok);
std::string canonical_print(const Constraint& c);
std::string canonical_print(const Quantifier& q);

/// canonical_print(parse(source)); throws ParseError.
std::string normalize(std::string_view source);

}  // namespace cqlkit
