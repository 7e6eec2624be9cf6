#include "cqlkit/engine.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>

#include "cqlkit/parser.hpp"
#include "cqlkit/pattern.hpp"

namespace cqlkit {

void check_attributes(const Query& q) {
  auto unknown = unknown_attributes(q);
  if (!unknown.empty()) throw UnknownAttribute(unknown.front());
}

namespace {

constexpr std::int32_t kUnbound = -1;
using Bitmap = std::vector<std::uint8_t>;
using SlotMap = std::unordered_map<std::string, std::size_t>;

bool is_plain_literal(const std::string& pattern) {
  return pattern.find_first_of(R"(\^$.|?*+()[]{})") == std::string::npos;
}

/// Per-query slot layout: one slot per label that binds a single token and
/// is either in the head (reported on hits) or compared by a condition.
struct SlotLayout {
  SlotMap slot_of;
  std::vector<std::size_t> head_slots;
  std::vector<std::string> names;

  explicit SlotLayout(const Query& q) {
    auto referenced = referenced_labels(q);
    auto add = [&](const TokenExpr& t, bool in_head) {
      if (!t.label || !t.quant.is_one()) return;
      bool is_ref = std::find(referenced.begin(), referenced.end(), *t.label) != referenced.end();
      if (!in_head && !is_ref) return;
      slot_of.emplace(*t.label, names.size());
      if (in_head) head_slots.push_back(names.size());
      names.push_back(*t.label);
    };
    for (const auto& t : q.head.tokens) add(t, true);
    for (const auto& w : q.withins) {
      if (const auto* seq = std::get_if<SeqExpr>(&w)) {
        for (const auto& t : seq->tokens) add(t, false);
      }
    }
  }

  std::size_t size() const { return names.size(); }
};

struct CompiledCondition {
  std::size_t left_slot;
  std::string left_attr;
  bool equal;
  std::size_t right_slot;
  std::string right_attr;
};

std::vector<CompiledCondition> compile_conditions(const Query& q, const SlotLayout& slots) {
  std::vector<CompiledCondition> out;
  for (const auto& g : q.conditions) {
    out.push_back(CompiledCondition{slots.slot_of.at(g.left.label), g.left.attr, g.op == CompareOp::Equal,
                                    slots.slot_of.at(g.right.label), g.right.attr});
  }
  return out;
}

bool conditions_hold(const std::vector<CompiledCondition>& conds, const std::vector<std::int32_t>& bind,
                     const Document& doc) {
  for (const auto& c : conds) {
    auto l = bind[c.left_slot];
    auto r = bind[c.right_slot];
    if (l == kUnbound || r == kUnbound) return false;
    bool same = doc.tokens[l].get(c.left_attr) == doc.tokens[r].get(c.right_attr);
    if (same != c.equal) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Index-backed evaluator

class ConstraintEvaluator {
 public:
  explicit ConstraintEvaluator(const CorpusIndex& idx) : idx_(idx) {}

  Bitmap eval(const Constraint& c) {
    const std::size_t n = idx_.token_count();
    switch (c.kind) {
      case Constraint::Kind::Empty:
        return Bitmap(n, 1);
      case Constraint::Kind::Atom: {
        Bitmap out(n, 0);
        const auto& pattern = c.atom.value;
        if (is_plain_literal(pattern)) {
          for (auto p : idx_.postings(c.atom.attr, pattern)) out[p] = 1;
        } else {
          const auto& re = cache_.get(pattern);
          for (const auto& [value, positions] : idx_.postings(c.atom.attr)) {
            if (!re.full_match(value)) continue;
            for (auto p : positions) out[p] = 1;
          }
        }
        if (c.atom.op == CompareOp::NotEqual) {
          for (auto& b : out) b = !b;
        }
        return out;
      }
      case Constraint::Kind::Not: {
        Bitmap out = eval(c.children.front());
        for (auto& b : out) b = !b;
        return out;
      }
      case Constraint::Kind::And:
      case Constraint::Kind::Or: {
        bool is_and = c.kind == Constraint::Kind::And;
        Bitmap out = eval(c.children.front());
        for (std::size_t i = 1; i < c.children.size(); ++i) {
          Bitmap next = eval(c.children[i]);
          for (std::size_t p = 0; p < n; ++p) out[p] = is_and ? (out[p] & next[p]) : (out[p] | next[p]);
        }
        return out;
      }
    }
    return Bitmap(n, 0);
  }

 private:
  const CorpusIndex& idx_;
  PatternCache cache_;
};

struct SeqPlan {
  std::vector<Bitmap> ok;
  std::vector<Quantifier> quants;
  std::vector<std::int32_t> slots;  // kUnbound if the element binds nothing
  bool binds = false;
};

SeqPlan plan_seq(const SeqExpr& seq, const SlotLayout& layout, ConstraintEvaluator& ev) {
  SeqPlan plan;
  for (const auto& t : seq.tokens) {
    plan.ok.push_back(ev.eval(t.constraint));
    plan.quants.push_back(t.quant);
    std::int32_t slot = kUnbound;
    if (t.label) {
      auto it = layout.slot_of.find(*t.label);
      if (it != layout.slot_of.end()) slot = static_cast<std::int32_t>(it->second);
    }
    plan.slots.push_back(slot);
    plan.binds = plan.binds || slot != kUnbound;
  }
  return plan;
}

struct Partial {
  std::uint32_t end;
  std::vector<std::int32_t> bind;

  bool operator<(const Partial& o) const { return std::tie(end, bind) < std::tie(o.end, o.bind); }
  bool operator==(const Partial& o) const { return end == o.end && bind == o.bind; }
};

/// Memoized matcher of one sequence over one document: from(i, p) lists
/// every (end, bindings) reachable by matching elements i.. starting at p.
class SeqMatcher {
 public:
  SeqMatcher(const SeqPlan& plan, std::uint32_t doc_begin, std::uint32_t len, std::size_t slot_count)
      : plan_(plan), len_(len), slot_count_(slot_count), memo_((plan.ok.size() + 1) * (len + 1)) {
    run_.resize(plan.ok.size());
    for (std::size_t e = 0; e < plan.ok.size(); ++e) {
      auto& run = run_[e];
      run.assign(len + 1, 0);
      for (std::uint32_t p = len; p-- > 0;) run[p] = plan.ok[e][doc_begin + p] ? run[p + 1] + 1 : 0;
    }
  }

  const std::vector<Partial>& from(std::size_t elem, std::uint32_t p) {
    auto& slot = memo_[elem * (len_ + 1) + p];
    if (slot) return *slot;
    std::vector<Partial> out;
    if (elem == plan_.ok.size()) {
      out.push_back(Partial{p, std::vector<std::int32_t>(plan_.binds ? slot_count_ : 0, kUnbound)});
    } else {
      const auto& q = plan_.quants[elem];
      std::uint32_t reach = run_[elem][p];
      std::uint32_t hi = q.max ? std::min<std::uint32_t>(*q.max, reach) : reach;
      for (std::uint32_t k = q.min; k <= hi; ++k) {
        const auto& rest = from(elem + 1, p + k);
        for (const auto& r : rest) {
          Partial part = r;
          if (plan_.slots[elem] != kUnbound) part.bind[plan_.slots[elem]] = static_cast<std::int32_t>(p);
          out.push_back(std::move(part));
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    slot = std::move(out);
    return *slot;
  }

 private:
  const SeqPlan& plan_;
  std::uint32_t len_;
  std::size_t slot_count_;
  std::vector<std::vector<std::uint32_t>> run_;
  std::vector<std::optional<std::vector<Partial>>> memo_;
};

/// Containment test for one within clause inside one document.
class WithinScopeCheck {
 public:
  virtual ~WithinScopeCheck() = default;
  /// Binding candidates from scope matches containing [s, e); an empty
  /// vector means no containing match. Scopes that bind nothing return a
  /// single empty binding.
  virtual std::vector<std::vector<std::int32_t>> containing(std::uint32_t s, std::uint32_t e) = 0;
};

class StructureScope : public WithinScopeCheck {
 public:
  explicit StructureScope(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& spans) : spans_(spans) {}

  std::vector<std::vector<std::int32_t>> containing(std::uint32_t s, std::uint32_t e) override {
    // Spans of one name are non-overlapping, so only the last one starting
    // at or before s can contain [s, e).
    auto it = std::upper_bound(spans_.begin(), spans_.end(), std::make_pair(s, std::numeric_limits<std::uint32_t>::max()));
    if (it == spans_.begin()) return {};
    --it;
    if (it->first <= s && e <= it->second) return {{}};
    return {};
  }

 private:
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& spans_;
};

class SequenceScope : public WithinScopeCheck {
 public:
  SequenceScope(const SeqPlan& plan, std::uint32_t doc_begin, std::uint32_t len, std::size_t slot_count)
      : plan_(plan), matcher_(plan, doc_begin, len, slot_count), len_(len) {
    if (!plan.binds) {
      best_end_.assign(len + 1, 0);
      std::uint32_t best = 0;
      for (std::uint32_t s2 = 0; s2 < len; ++s2) {
        const auto& ms = matcher_.from(0, s2);
        if (!ms.empty()) best = std::max(best, ms.back().end);
        best_end_[s2] = best;
      }
    }
  }

  std::vector<std::vector<std::int32_t>> containing(std::uint32_t s, std::uint32_t e) override {
    if (!plan_.binds) {
      if (s < len_ && best_end_[s] >= e) return {{}};
      return {};
    }
    std::vector<std::vector<std::int32_t>> out;
    for (std::uint32_t s2 = 0; s2 <= s; ++s2) {
      for (const auto& m : matcher_.from(0, s2)) {
        if (m.end >= e && m.end > s2) out.push_back(m.bind);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const SeqPlan& plan_;
  SeqMatcher matcher_;
  std::uint32_t len_;
  std::vector<std::uint32_t> best_end_;
};

std::vector<std::int32_t> merge(const std::vector<std::int32_t>& base, const std::vector<std::int32_t>& add) {
  if (add.empty()) return base;
  std::vector<std::int32_t> out = base;
  for (std::size_t i = 0; i < add.size(); ++i) {
    if (add[i] != kUnbound) out[i] = add[i];
  }
  return out;
}

/// Depth-first search for one combination of scope bindings under which
/// every condition holds.
bool find_witness(const std::vector<std::vector<std::vector<std::int32_t>>>& scope_binds, std::size_t i,
                  const std::vector<std::int32_t>& acc, const std::vector<CompiledCondition>& conds,
                  const Document& doc) {
  if (i == scope_binds.size()) return conditions_hold(conds, acc, doc);
  for (const auto& b : scope_binds[i]) {
    if (find_witness(scope_binds, i + 1, merge(acc, b), conds, doc)) return true;
  }
  return false;
}

}  // namespace

HitSet execute(const Query& q, const CorpusIndex& idx, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("hit limit must be at least 1");
  check_attributes(q);
  SlotLayout layout(q);
  auto conds = compile_conditions(q, layout);

  ConstraintEvaluator ev(idx);
  SeqPlan head = plan_seq(q.head, layout, ev);
  std::vector<std::optional<SeqPlan>> scope_plans;
  for (const auto& w : q.withins) {
    if (const auto* seq = std::get_if<SeqExpr>(&w)) {
      scope_plans.emplace_back(plan_seq(*seq, layout, ev));
    } else {
      scope_plans.emplace_back(std::nullopt);
    }
  }

  HitSet result;
  const auto& docs = idx.corpus().docs;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    const auto len = static_cast<std::uint32_t>(doc.tokens.size());
    if (len == 0) continue;
    const std::uint32_t begin = idx.doc_offset(d);

    SeqMatcher head_matcher(head, begin, len, layout.size());
    std::vector<std::unique_ptr<WithinScopeCheck>> scopes;
    for (std::size_t w = 0; w < q.withins.size(); ++w) {
      if (scope_plans[w]) {
        scopes.push_back(std::make_unique<SequenceScope>(*scope_plans[w], begin, len, layout.size()));
      } else {
        scopes.push_back(std::make_unique<StructureScope>(idx.spans(std::get<StructureTag>(q.withins[w]).name, d)));
      }
    }

    for (std::uint32_t s = 0; s < len; ++s) {
      const auto& partials = head_matcher.from(0, s);
      for (std::size_t i = 0; i < partials.size();) {
        const std::uint32_t e = partials[i].end;
        std::size_t j = i;
        while (j < partials.size() && partials[j].end == e) ++j;
        if (e == s) {
          i = j;
          continue;
        }

        std::vector<std::vector<std::vector<std::int32_t>>> scope_binds;
        bool contained = true;
        for (auto& scope : scopes) {
          auto binds = scope->containing(s, e);
          if (binds.empty()) {
            contained = false;
            break;
          }
          scope_binds.push_back(std::move(binds));
        }

        std::optional<std::vector<std::int32_t>> witness;
        if (contained) {
          for (std::size_t k = i; k < j && !witness; ++k) {
            std::vector<std::int32_t> base = partials[k].bind;
            if (base.empty()) base.assign(layout.size(), kUnbound);
            if (conds.empty() || find_witness(scope_binds, 0, base, conds, doc)) witness = base;
          }
        }
        if (witness) {
          if (result.hits.size() == limit) {
            result.truncated = true;
            return result;
          }
          Hit h{static_cast<std::uint32_t>(d), s, e, {}};
          for (auto slot : layout.head_slots) {
            if ((*witness)[slot] != kUnbound) h.bindings[layout.names[slot]] = static_cast<std::uint32_t>((*witness)[slot]);
          }
          result.hits.push_back(std::move(h));
        }
        i = j;
      }
    }
  }
  return result;
}

ExecutionOutcome execution_accuracy(std::string_view pred, std::string_view gold, const CorpusIndex& idx,
                                    std::size_t limit) {
  Query gold_q;
  try {
    gold_q = parse(gold);
  } catch (const ParseError& e) {
    throw GoldInvalid(std::string("gold query does not parse: ") + e.what());
  }
  HitSet gold_hits;
  try {
    gold_hits = execute(gold_q, idx, limit);
  } catch (const std::exception& e) {
    throw GoldExecutionFailed(std::string("gold query failed to execute: ") + e.what());
  }

  ExecutionOutcome out;
  if (gold_hits.truncated) {
    out.warning = "gold hit set truncated at " + std::to_string(limit) + " hits; execution accuracy is indeterminate";
    return out;
  }
  auto pred_q = try_parse(pred);
  if (!pred_q) return out;
  HitSet pred_hits;
  try {
    pred_hits = execute(*pred_q, idx, limit);
  } catch (const std::exception&) {
    return out;
  }
  out.correct = !pred_hits.truncated && pred_hits.same_spans(gold_hits);
  return out;
}

}  // namespace cqlkit
