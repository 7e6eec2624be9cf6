#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cqlkit/ast.hpp"

namespace cqlkit {

/// (kind, ordered direct-child kinds, own lexical key) of one AST node.
///
/// Node kinds: Query, Seq, Token, Within, Condition, And, Or, Not, Atom,
/// Empty, Struct. Keys: Token -> optional "label:" plus quantifier bounds,
/// And/Or/Not -> operator, Atom -> attr, operator and value, Struct ->
/// name, Condition -> the comparison text. Query, Seq, Within and Empty
/// carry no key.
struct NodeSignature {
  std::string kind;
  std::vector<std::string> child_kinds;
  std::optional<std::string> key;

  bool operator==(const NodeSignature&) const = default;
  auto operator<=>(const NodeSignature&) const = default;
};

struct SignedNode {
  NodeSignature signature;
  bool is_leaf = false;
  std::size_t depth = 1;  // root is 1
};

/// Pre-order walk of `q` with each node's signature.
std::vector<SignedNode> signature_nodes(const Query& q);

struct AstShape {
  std::size_t depth = 0;        // nodes on the longest root-to-leaf path
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::size_t atom_count = 0;
  std::size_t token_expr_count = 0;
};

AstShape ast_shape(const Query& q);

std::string to_string(const NodeSignature& s);

}  // namespace cqlkit
