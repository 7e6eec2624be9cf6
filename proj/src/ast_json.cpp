#include "cqlkit/ast_json.hpp"

#include "cqlkit/signature.hpp"

namespace cqlkit {

using nlohmann::json;

namespace {

const char* op_name(CompareOp op) { return op == CompareOp::Equal ? "=" : "!="; }

json constraint_json(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Empty:
      return {{"type", "empty"}};
    case Constraint::Kind::Atom:
      return {{"type", "atom"}, {"attr", c.atom.attr}, {"op", op_name(c.atom.op)}, {"value", c.atom.value}};
    case Constraint::Kind::Not:
      return {{"type", "not"}, {"child", constraint_json(c.children.front())}};
    case Constraint::Kind::And:
    case Constraint::Kind::Or: {
      json kids = json::array();
      for (const auto& child : c.children) kids.push_back(constraint_json(child));
      return {{"type", c.kind == Constraint::Kind::And ? "and" : "or"}, {"children", kids}};
    }
  }
  return nullptr;
}

json seq_json(const SeqExpr& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    json tj;
    tj["label"] = t.label ? json(*t.label) : json(nullptr);
    tj["constraint"] = constraint_json(t.constraint);
    tj["quantifier"] = {{"min", t.quant.min}, {"max", t.quant.max ? json(*t.quant.max) : json(nullptr)}};
    tokens.push_back(std::move(tj));
  }
  return {{"type", "sequence"}, {"tokens", tokens}};
}

}  // namespace

json to_json(const Query& q) {
  json j;
  j["class"] = to_string(classify(q));
  j["head"] = seq_json(q.head);
  j["withins"] = json::array();
  for (const auto& w : q.withins) {
    if (const auto* s = std::get_if<SeqExpr>(&w)) {
      j["withins"].push_back(seq_json(*s));
    } else {
      j["withins"].push_back({{"type", "structure"}, {"name", std::get<StructureTag>(w).name}});
    }
  }
  j["conditions"] = json::array();
  for (const auto& g : q.conditions) {
    j["conditions"].push_back({{"left", {{"label", g.left.label}, {"attr", g.left.attr}}},
                               {"op", op_name(g.op)},
                               {"right", {{"label", g.right.label}, {"attr", g.right.attr}}}});
  }
  return j;
}

std::string render_tree(const Query& q) {
  std::string out;
  for (const auto& n : signature_nodes(q)) {
    out += std::string(2 * (n.depth - 1), ' ') + n.signature.kind;
    if (n.signature.key) out += " " + *n.signature.key;
    out += "\n";
  }
  return out;
}

}  // namespace cqlkit
