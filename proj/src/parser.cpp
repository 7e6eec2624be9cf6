#include "cqlkit/parser.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "cqlkit/lexer.hpp"
#include "cqlkit/pattern.hpp"

namespace cqlkit {

namespace {

std::string format_message(std::size_t offset, const std::vector<std::string>& expected,
                           const std::string& message) {
  std::string out = "offset " + std::to_string(offset) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source), tokens_(lex(source)) {}

  Query run() {
    Query q;
    q.head = parse_seq();
    while (at(TokenKind::WithinKw)) {
      advance();
      if (at(TokenKind::StructOpen)) {
        q.withins.emplace_back(parse_structure());
      } else if (starts_token()) {
        q.withins.emplace_back(parse_seq());
      } else {
        fail({to_string(TokenKind::LBracket), to_string(TokenKind::StructOpen)},
             "dangling 'within'");
      }
    }
    if (at(TokenKind::CondSep)) {
      advance();
      q.conditions.push_back(parse_condition());
      while (at(TokenKind::And)) {
        advance();
        q.conditions.push_back(parse_condition());
      }
    }
    if (!at_end()) {
      std::vector<std::string> expected = {"'within'"};
      if (q.conditions.empty()) expected.push_back("'::'");
      else expected.push_back("'&'");
      if (q.withins.empty() && q.conditions.empty()) expected.insert(expected.begin(), "'['");
      fail(expected, "unexpected " + describe(peek()));
    }
    check_labels(q);
    return q;
  }

 private:
  std::string_view source_;
  std::vector<CqlToken> tokens_;
  std::size_t pos_ = 0;

  std::map<std::string, std::size_t> labels_;  // label -> declaration offset
  std::vector<std::size_t> condition_offsets_;

  bool at_end() const { return pos_ >= tokens_.size(); }
  const CqlToken* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  bool at(TokenKind k) const { return !at_end() && tokens_[pos_].kind == k; }
  const CqlToken& advance() { return tokens_[pos_++]; }
  std::size_t offset() const { return at_end() ? source_.size() : tokens_[pos_].span.begin; }

  static std::string describe(const CqlToken* tok) {
    if (!tok) return "end of input";
    if (tok->kind == TokenKind::Error) return "invalid character '" + tok->text + "'";
    return "'" + tok->text + "'";
  }

  [[noreturn]] void fail(std::vector<std::string> expected, std::string message) const {
    throw ParseError(offset(), std::move(expected), std::move(message));
  }

  const CqlToken& expect(TokenKind k, const char* what) {
    if (!at(k)) fail({to_string(k)}, std::string(what) + ", found " + describe(peek()));
    return advance();
  }

  bool is_label_token(const CqlToken* t) const {
    return t && (t->kind == TokenKind::Ident || t->kind == TokenKind::Number);
  }

  bool starts_token() const {
    if (at(TokenKind::LBracket)) return true;
    return is_label_token(peek()) && peek(1) && peek(1)->kind == TokenKind::LabelSep;
  }

  SeqExpr parse_seq() {
    SeqExpr seq;
    if (!starts_token()) fail({"'['", "label"}, "expected a token expression, found " + describe(peek()));
    std::vector<std::size_t> offsets;
    while (starts_token()) {
      offsets.push_back(offset());
      seq.tokens.push_back(parse_token());
    }
    // Label table is filled after the vector stops reallocating.
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (seq.tokens[i].label) register_label(*seq.tokens[i].label, offsets[i]);
    }
    return seq;
  }

  void register_label(const std::string& label, std::size_t at_offset) {
    if (labels_.count(label)) {
      throw ParseError(at_offset, {}, "duplicate label '" + label + "'");
    }
    labels_.emplace(label, at_offset);
  }

  TokenExpr parse_token() {
    TokenExpr tok;
    if (!at(TokenKind::LBracket)) {
      tok.label = advance().text;
      expect(TokenKind::LabelSep, "expected ':' after label");
    }
    expect(TokenKind::LBracket, "expected '['");
    if (at(TokenKind::RBracket)) {
      tok.constraint = Constraint::empty();
    } else {
      tok.constraint = parse_or();
    }
    if (!at(TokenKind::RBracket)) {
      fail({"']'", "'&'", "'|'"}, "unbalanced '[', found " + describe(peek()));
    }
    advance();
    tok.quant = parse_quantifier();
    return tok;
  }

  Quantifier parse_quantifier() {
    if (at(TokenKind::QuantQmark)) {
      advance();
      return Quantifier::optional();
    }
    if (at(TokenKind::QuantStar)) {
      advance();
      return Quantifier::star();
    }
    if (at(TokenKind::QuantPlus)) {
      advance();
      return Quantifier::plus();
    }
    if (!at(TokenKind::LBrace)) return Quantifier::one();
    std::size_t brace_offset = offset();
    advance();
    Quantifier q;
    q.min = parse_count();
    if (at(TokenKind::Comma)) {
      advance();
      if (at(TokenKind::Number)) {
        q.max = parse_count();
      } else {
        q.max = std::nullopt;
      }
    } else {
      q.max = q.min;
    }
    if (!at(TokenKind::RBrace)) {
      fail({at(TokenKind::Number) ? "'}'" : "number", "'}'"}, "bad quantifier, found " + describe(peek()));
    }
    advance();
    if (q.max && *q.max < q.min) {
      throw ParseError(brace_offset, {}, "bad quantifier: minimum exceeds maximum");
    }
    return q;
  }

  std::uint32_t parse_count() {
    if (!at(TokenKind::Number)) fail({"number"}, "bad quantifier, found " + describe(peek()));
    const auto& t = advance();
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError(t.span.begin, {}, "bad quantifier: count out of range");
    }
    return value;
  }

  static void splice(Constraint::Kind kind, Constraint part, std::vector<Constraint>& into) {
    if (part.kind == kind) {
      for (auto& c : part.children) into.push_back(std::move(c));
    } else {
      into.push_back(std::move(part));
    }
  }

  Constraint parse_or() {
    Constraint first = parse_and();
    if (!at(TokenKind::Or)) return first;
    std::vector<Constraint> parts;
    splice(Constraint::Kind::Or, std::move(first), parts);
    while (at(TokenKind::Or)) {
      advance();
      splice(Constraint::Kind::Or, parse_and(), parts);
    }
    return Constraint::make_or(std::move(parts));
  }

  Constraint parse_and() {
    Constraint first = parse_unary();
    if (!at(TokenKind::And)) return first;
    std::vector<Constraint> parts;
    splice(Constraint::Kind::And, std::move(first), parts);
    while (at(TokenKind::And)) {
      advance();
      splice(Constraint::Kind::And, parse_unary(), parts);
    }
    return Constraint::make_and(std::move(parts));
  }

  Constraint parse_unary() {
    if (at(TokenKind::Not)) {
      advance();
      return Constraint::make_not(parse_unary());
    }
    if (at(TokenKind::LParen)) {
      advance();
      Constraint inner = parse_or();
      if (!at(TokenKind::RParen)) fail({"')'", "'&'", "'|'"}, "unbalanced '(', found " + describe(peek()));
      advance();
      return inner;
    }
    if (!at(TokenKind::Ident)) {
      fail({"'!'", "'('", "attribute name"}, "expected an attribute constraint, found " + describe(peek()));
    }
    std::string attr = advance().text;
    CompareOp op;
    if (at(TokenKind::Eq)) {
      op = CompareOp::Equal;
    } else if (at(TokenKind::Neq)) {
      op = CompareOp::NotEqual;
    } else {
      fail({"'='", "'!='"}, "expected comparison after attribute, found " + describe(peek()));
    }
    advance();
    if (!at(TokenKind::StringLiteral)) {
      fail({"string literal"}, "expected quoted value, found " + describe(peek()));
    }
    const auto& lit = advance();
    try {
      ValuePattern check(lit.value);
    } catch (const RegexError& e) {
      throw ParseError(lit.span.begin, {}, e.what());
    }
    return Constraint::make_atom(std::move(attr), op, lit.value);
  }

  StructureTag parse_structure() {
    expect(TokenKind::StructOpen, "expected '<'");
    const auto& name = expect(TokenKind::Ident, "expected structure name");
    expect(TokenKind::StructSelfClose, "expected '/>'");
    return StructureTag{name.text};
  }

  LabelRef parse_ref() {
    if (!is_label_token(peek())) fail({"label"}, "expected label reference, found " + describe(peek()));
    LabelRef ref;
    ref.label = advance().text;
    expect(TokenKind::Dot, "expected '.' after label");
    ref.attr = expect(TokenKind::Ident, "expected attribute name").text;
    return ref;
  }

  GlobalConstraint parse_condition() {
    condition_offsets_.push_back(offset());
    GlobalConstraint g;
    g.left = parse_ref();
    if (at(TokenKind::Eq)) {
      g.op = CompareOp::Equal;
    } else if (at(TokenKind::Neq)) {
      g.op = CompareOp::NotEqual;
    } else {
      fail({"'='", "'!='"}, "expected comparison, found " + describe(peek()));
    }
    advance();
    g.right = parse_ref();
    return g;
  }

  static const TokenExpr* find_labeled(const SeqExpr& seq, const std::string& label) {
    for (const auto& t : seq.tokens) {
      if (t.label && *t.label == label) return &t;
    }
    return nullptr;
  }

  void check_labels(const Query& q) {
    for (std::size_t i = 0; i < q.conditions.size(); ++i) {
      const auto& g = q.conditions[i];
      std::size_t at_offset = condition_offsets_[i];
      if (g.left.label == g.right.label) {
        throw ParseError(at_offset, {}, "condition compares label '" + g.left.label + "' with itself");
      }
      for (const auto* ref : {&g.left, &g.right}) {
        auto it = labels_.find(ref->label);
        if (it == labels_.end()) {
          throw ParseError(at_offset, {}, "undeclared label '" + ref->label + "'");
        }
        const TokenExpr* decl = find_labeled(q.head, ref->label);
        for (const auto& w : q.withins) {
          if (decl) break;
          if (const auto* seq = std::get_if<SeqExpr>(&w)) decl = find_labeled(*seq, ref->label);
        }
        if (decl && !decl->quant.is_one()) {
          throw ParseError(it->second, {},
                           "label '" + ref->label + "' is compared in a condition and must bind exactly one token");
        }
      }
    }
  }
};

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, std::string message)
    : std::runtime_error(format_message(offset, expected, message)),
      offset_(offset),
      expected_(std::move(expected)),
      message_(std::move(message)) {}

Query parse(std::string_view source) { return Parser(source).run(); }

std::optional<Query> try_parse(std::string_view source) {
  try {
    return parse(source);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::string render_diagnostic(std::string_view source, const ParseError& err) {
  std::string line(source);
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::size_t col = std::min(err.offset(), source.size());
  std::string out = "error: " + std::string(err.what()) + "\n  " + line + "\n  ";
  // Caret column counts bytes; fine for the ASCII query syntax.
  out += std::string(col, ' ') + "^";
  return out;
}

}  // namespace cqlkit
