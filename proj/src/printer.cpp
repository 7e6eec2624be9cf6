#include "cqlkit/printer.hpp"

#include "cqlkit/lexer.hpp"
#include "cqlkit/parser.hpp"

namespace cqlkit {

namespace {

const char* op_text(CompareOp op) { return op == CompareOp::Equal ? "=" : "!="; }

bool is_compound(const Constraint& c) {
  return c.kind == Constraint::Kind::And || c.kind == Constraint::Kind::Or;
}

std::string print_child(const Constraint& child, bool wrap_compound_and) {
  std::string inner = canonical_print(child);
  bool wrap = child.kind == Constraint::Kind::Or ||
              (wrap_compound_and && child.kind == Constraint::Kind::And);
  return wrap ? "(" + inner + ")" : inner;
}

}  // namespace

std::string canonical_print(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Empty:
      return "";
    case Constraint::Kind::Atom:
      return c.atom.attr + op_text(c.atom.op) + quote_literal(c.atom.value);
    case Constraint::Kind::Not: {
      const auto& child = c.children.front();
      std::string inner = canonical_print(child);
      return is_compound(child) ? "!(" + inner + ")" : "!" + inner;
    }
    case Constraint::Kind::And:
    case Constraint::Kind::Or: {
      bool is_and = c.kind == Constraint::Kind::And;
      std::string out;
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i) out += is_and ? " & " : " | ";
        // Or binds looser than And, so only Or operands of And need
        // parentheses; same-kind nesting is flattened by the parser.
        out += print_child(c.children[i], /*wrap_compound_and=*/is_and);
      }
      return out;
    }
  }
  return "";
}

std::string canonical_print(const Quantifier& q) {
  if (q.is_one()) return "";
  if (q == Quantifier::optional()) return "?";
  if (q == Quantifier::star()) return "*";
  if (q == Quantifier::plus()) return "+";
  std::string out = "{" + std::to_string(q.min) + ",";
  if (q.max) out += std::to_string(*q.max);
  return out + "}";
}

std::string canonical_print(const TokenExpr& tok) {
  std::string out;
  if (tok.label) out += *tok.label + ":";
  out += "[" + canonical_print(tok.constraint) + "]";
  out += canonical_print(tok.quant);
  return out;
}

std::string canonical_print(const SeqExpr& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i) out += " ";
    out += canonical_print(seq.tokens[i]);
  }
  return out;
}

std::string canonical_print(const Query& q) {
  std::string out = canonical_print(q.head);
  for (const auto& w : q.withins) {
    out += " within ";
    if (const auto* seq = std::get_if<SeqExpr>(&w)) {
      out += canonical_print(*seq);
    } else {
      out += "<" + std::get<StructureTag>(w).name + "/>";
    }
  }
  for (std::size_t i = 0; i < q.conditions.size(); ++i) {
    const auto& g = q.conditions[i];
    out += i ? " & " : " :: ";
    out += g.left.label + "." + g.left.attr + " " + op_text(g.op) + " " + g.right.label + "." + g.right.attr;
  }
  return out;
}

std::string normalize(std::string_view source) { return canonical_print(parse(source)); }

}  // namespace cqlkit
