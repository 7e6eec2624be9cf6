#include "cqlkit/signature.hpp"

#include <algorithm>

#include "cqlkit/lexer.hpp"

namespace cqlkit {

namespace {

const char* constraint_kind(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Atom: return "Atom";
    case Constraint::Kind::And: return "And";
    case Constraint::Kind::Or: return "Or";
    case Constraint::Kind::Not: return "Not";
    case Constraint::Kind::Empty: return "Empty";
  }
  return "Empty";
}

const char* op_text(CompareOp op) { return op == CompareOp::Equal ? "=" : "!="; }

class Walker {
 public:
  std::vector<SignedNode> nodes;

  void query(const Query& q) {
    std::vector<std::string> kids = {"Seq"};
    for (std::size_t i = 0; i < q.withins.size(); ++i) kids.emplace_back("Within");
    for (std::size_t i = 0; i < q.conditions.size(); ++i) kids.emplace_back("Condition");
    emit("Query", std::move(kids), std::nullopt, 1);
    seq(q.head, 2);
    for (const auto& w : q.withins) {
      if (const auto* s = std::get_if<SeqExpr>(&w)) {
        emit("Within", {"Seq"}, std::nullopt, 2);
        seq(*s, 3);
      } else {
        emit("Within", {"Struct"}, std::nullopt, 2);
        emit("Struct", {}, std::get<StructureTag>(w).name, 3);
      }
    }
    for (const auto& g : q.conditions) {
      emit("Condition", {}, g.left.label + "." + g.left.attr + op_text(g.op) + g.right.label + "." + g.right.attr, 2);
    }
  }

 private:
  void emit(std::string kind, std::vector<std::string> kids, std::optional<std::string> key, std::size_t depth) {
    SignedNode n;
    n.is_leaf = kids.empty();
    n.signature = NodeSignature{std::move(kind), std::move(kids), std::move(key)};
    n.depth = depth;
    nodes.push_back(std::move(n));
  }

  void seq(const SeqExpr& s, std::size_t depth) {
    emit("Seq", std::vector<std::string>(s.tokens.size(), "Token"), std::nullopt, depth);
    for (const auto& t : s.tokens) token(t, depth + 1);
  }

  void token(const TokenExpr& t, std::size_t depth) {
    std::string key = t.label ? *t.label + ":" : "";
    const auto& q = t.quant;
    key += "{" + std::to_string(q.min) + "," + (q.max ? std::to_string(*q.max) : "") + "}";
    emit("Token", {constraint_kind(t.constraint)}, std::move(key), depth);
    constraint(t.constraint, depth + 1);
  }

  void constraint(const Constraint& c, std::size_t depth) {
    switch (c.kind) {
      case Constraint::Kind::Empty:
        emit("Empty", {}, std::nullopt, depth);
        return;
      case Constraint::Kind::Atom:
        emit("Atom", {}, c.atom.attr + op_text(c.atom.op) + quote_literal(c.atom.value), depth);
        return;
      case Constraint::Kind::And:
      case Constraint::Kind::Or:
      case Constraint::Kind::Not: {
        std::vector<std::string> kids;
        for (const auto& child : c.children) kids.emplace_back(constraint_kind(child));
        const char* key = c.kind == Constraint::Kind::And ? "&" : c.kind == Constraint::Kind::Or ? "|" : "!";
        emit(constraint_kind(c), std::move(kids), std::string(key), depth);
        for (const auto& child : c.children) constraint(child, depth + 1);
        return;
      }
    }
  }
};

}  // namespace

std::vector<SignedNode> signature_nodes(const Query& q) {
  Walker w;
  w.query(q);
  return std::move(w.nodes);
}

AstShape ast_shape(const Query& q) {
  AstShape shape;
  for (const auto& n : signature_nodes(q)) {
    ++shape.node_count;
    if (n.is_leaf) ++shape.leaf_count;
    shape.depth = std::max(shape.depth, n.depth);
    if (n.signature.kind == "Atom") ++shape.atom_count;
    if (n.signature.kind == "Token") ++shape.token_expr_count;
  }
  return shape;
}

std::string to_string(const NodeSignature& s) {
  std::string out = s.kind + "(";
  for (std::size_t i = 0; i < s.child_kinds.size(); ++i) {
    if (i) out += ",";
    out += s.child_kinds[i];
  }
  out += ")";
  if (s.key) out += "[" + *s.key + "]";
  return out;
}

}  // namespace cqlkit
