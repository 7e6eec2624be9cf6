#include "cqlkit/ast.hpp"

#include <algorithm>

namespace cqlkit {

Constraint Constraint::make_atom(std::string attr, CompareOp op, std::string value) {
  Constraint c;
  c.kind = Kind::Atom;
  c.atom = AttrConstraint{std::move(attr), op, std::move(value)};
  return c;
}

Constraint Constraint::make_and(std::vector<Constraint> children) {
  Constraint c;
  c.kind = Kind::And;
  c.children = std::move(children);
  return c;
}

Constraint Constraint::make_or(std::vector<Constraint> children) {
  Constraint c;
  c.kind = Kind::Or;
  c.children = std::move(children);
  return c;
}

Constraint Constraint::make_not(Constraint child) {
  Constraint c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(child));
  return c;
}

QueryClass classify(const Query& q) {
  if (!q.conditions.empty()) return QueryClass::Condition;
  if (!q.withins.empty()) return QueryClass::Within;
  return QueryClass::Simple;
}

const char* to_string(QueryClass c) {
  switch (c) {
    case QueryClass::Simple: return "simple";
    case QueryClass::Within: return "within";
    case QueryClass::Condition: return "condition";
  }
  return "simple";
}

std::optional<QueryClass> query_class_from_string(std::string_view s) {
  if (s == "simple") return QueryClass::Simple;
  if (s == "within") return QueryClass::Within;
  if (s == "condition") return QueryClass::Condition;
  return std::nullopt;
}

bool is_known_attribute(std::string_view attr) {
  return attr == "word" || attr == "pos" || attr == "lemma";
}

namespace {

void collect_attrs(const Constraint& c, std::vector<std::string>& out) {
  if (c.kind == Constraint::Kind::Atom) {
    out.push_back(c.atom.attr);
    return;
  }
  for (const auto& child : c.children) collect_attrs(child, out);
}

void collect_attrs(const SeqExpr& seq, std::vector<std::string>& out) {
  for (const auto& tok : seq.tokens) collect_attrs(tok.constraint, out);
}

}  // namespace

std::vector<std::string> unknown_attributes(const Query& q) {
  std::vector<std::string> all;
  collect_attrs(q.head, all);
  for (const auto& w : q.withins) {
    if (const auto* seq = std::get_if<SeqExpr>(&w)) collect_attrs(*seq, all);
  }
  for (const auto& g : q.conditions) {
    all.push_back(g.left.attr);
    all.push_back(g.right.attr);
  }
  std::vector<std::string> out;
  for (auto& a : all) {
    if (is_known_attribute(a)) continue;
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::string> referenced_labels(const Query& q) {
  std::vector<std::string> out;
  auto add = [&](const std::string& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  for (const auto& g : q.conditions) {
    add(g.left.label);
    add(g.right.label);
  }
  return out;
}

std::optional<std::uint64_t> max_span_length(const SeqExpr& seq) {
  std::uint64_t total = 0;
  for (const auto& tok : seq.tokens) {
    if (!tok.quant.max) return std::nullopt;
    total += *tok.quant.max;
  }
  return total;
}

}  // namespace cqlkit
