#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cqlkit {

enum class CompareOp { Equal, NotEqual };

/// attr (=|!=) "value", where value is a full-match regular expression.
struct AttrConstraint {
  std::string attr;
  CompareOp op = CompareOp::Equal;
  std::string value;

  bool operator==(const AttrConstraint&) const = default;
};

/// Boolean tree over attribute constraints. And/Or hold >= 2 children,
/// Not exactly one; Empty is only ever the whole constraint of `[]`.
struct Constraint {
  enum class Kind { Atom, And, Or, Not, Empty };

  Kind kind = Kind::Empty;
  AttrConstraint atom;
  std::vector<Constraint> children;

  static Constraint empty() { return {}; }
  static Constraint make_atom(std::string attr, CompareOp op, std::string value);
  static Constraint make_and(std::vector<Constraint> children);
  static Constraint make_or(std::vector<Constraint> children);
  static Constraint make_not(Constraint child);

  bool operator==(const Constraint&) const = default;
};

struct Quantifier {
  std::uint32_t min = 1;
  std::optional<std::uint32_t> max = 1;  // nullopt: unbounded

  static Quantifier one() { return {1, 1}; }
  static Quantifier optional() { return {0, 1}; }
  static Quantifier star() { return {0, std::nullopt}; }
  static Quantifier plus() { return {1, std::nullopt}; }
  static Quantifier range(std::uint32_t lo, std::uint32_t hi) { return {lo, hi}; }

  bool is_one() const { return min == 1 && max == 1; }
  bool bounded() const { return max.has_value(); }

  bool operator==(const Quantifier&) const = default;
};

struct TokenExpr {
  std::optional<std::string> label;
  Constraint constraint;
  Quantifier quant;

  bool operator==(const TokenExpr&) const = default;
};

struct SeqExpr {
  std::vector<TokenExpr> tokens;

  bool operator==(const SeqExpr&) const = default;
};

struct StructureTag {
  std::string name;

  bool operator==(const StructureTag&) const = default;
};

using WithinScope = std::variant<SeqExpr, StructureTag>;

struct LabelRef {
  std::string label;
  std::string attr;

  bool operator==(const LabelRef&) const = default;
};

/// label.attr (=|!=) label.attr, evaluated on the bound tokens.
struct GlobalConstraint {
  LabelRef left;
  CompareOp op = CompareOp::Equal;
  LabelRef right;

  bool operator==(const GlobalConstraint&) const = default;
};

struct Query {
  SeqExpr head;
  std::vector<WithinScope> withins;
  std::vector<GlobalConstraint> conditions;

  bool operator==(const Query&) const = default;
};

enum class QueryClass { Simple, Within, Condition };

QueryClass classify(const Query& q);

const char* to_string(QueryClass c);
std::optional<QueryClass> query_class_from_string(std::string_view s);

/// Attribute names every corpus provides.
bool is_known_attribute(std::string_view attr);

/// Attribute names used by `q` that are not word/pos/lemma, in order of
/// first appearance.
std::vector<std::string> unknown_attributes(const Query& q);

/// Labels referenced by the global constraints of `q`.
std::vector<std::string> referenced_labels(const Query& q);

/// Sum of quantifier maxima; nullopt when any token is unbounded.
std::optional<std::uint64_t> max_span_length(const SeqExpr& seq);

}  // namespace cqlkit
