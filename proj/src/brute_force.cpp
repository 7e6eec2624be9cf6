#include <algorithm>
#include <map>
#include <set>

#include "cqlkit/engine.hpp"
#include "cqlkit/pattern.hpp"

namespace cqlkit {

namespace {

using Binding = std::map<std::string, std::uint32_t>;

class BruteForce {
 public:
  BruteForce(const Query& q, const AnnotatedCorpus& c) : q_(q), corpus_(c) {
    for (const auto& g : q.conditions) {
      referenced_.insert(g.left.label);
      referenced_.insert(g.right.label);
    }
  }

  HitSet run() {
    HitSet out;
    for (std::uint32_t d = 0; d < corpus_.docs.size(); ++d) {
      const auto& doc = corpus_.docs[d];
      const auto len = static_cast<std::uint32_t>(doc.tokens.size());

      // Every span of every within sequence, with its binding sets.
      std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<Binding>>> scope_matches;
      for (const auto& w : q_.withins) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<Binding>> matches;
        if (const auto* seq = std::get_if<SeqExpr>(&w)) {
          for (std::uint32_t s = 0; s < len; ++s) {
            for (std::uint32_t e = s + 1; e <= len; ++e) {
              auto binds = decompositions(*seq, doc, s, e);
              if (!binds.empty()) matches[{s, e}] = std::move(binds);
            }
          }
        } else {
          const auto& name = std::get<StructureTag>(w).name;
          for (const auto& span : corpus_.structures) {
            if (span.doc_id == d && span.name == name) matches[{span.start, span.end}] = {Binding{}};
          }
        }
        scope_matches.push_back(std::move(matches));
      }

      for (std::uint32_t s = 0; s < len; ++s) {
        for (std::uint32_t e = s + 1; e <= len; ++e) {
          auto head_binds = decompositions(q_.head, doc, s, e);
          if (head_binds.empty()) continue;

          // Candidate bindings per within clause from containing matches.
          std::vector<std::vector<Binding>> scope_binds;
          bool ok = true;
          for (const auto& matches : scope_matches) {
            std::vector<Binding> cands;
            for (const auto& [span, binds] : matches) {
              if (span.first <= s && span.second >= e) cands.insert(cands.end(), binds.begin(), binds.end());
            }
            if (cands.empty()) {
              ok = false;
              break;
            }
            scope_binds.push_back(std::move(cands));
          }
          if (!ok) continue;

          for (const auto& hb : head_binds) {
            if (satisfiable(scope_binds, 0, hb, doc)) {
              Hit h{d, s, e, {}};
              for (const auto& [label, at] : hb) {
                if (is_head_label(label)) h.bindings[label] = at;
              }
              out.hits.push_back(std::move(h));
              break;
            }
          }
        }
      }
    }
    return out;
  }

 private:
  const Query& q_;
  const AnnotatedCorpus& corpus_;
  std::set<std::string> referenced_;
  PatternCache cache_;

  bool is_head_label(const std::string& label) const {
    return std::any_of(q_.head.tokens.begin(), q_.head.tokens.end(),
                       [&](const TokenExpr& t) { return t.label && *t.label == label; });
  }

  bool holds(const Constraint& c, const AnnToken& tok) {
    switch (c.kind) {
      case Constraint::Kind::Empty:
        return true;
      case Constraint::Kind::Atom: {
        bool m = cache_.full_match(c.atom.value, tok.get(c.atom.attr));
        return c.atom.op == CompareOp::Equal ? m : !m;
      }
      case Constraint::Kind::Not:
        return !holds(c.children.front(), tok);
      case Constraint::Kind::And:
        for (const auto& child : c.children) {
          if (!holds(child, tok)) return false;
        }
        return true;
      case Constraint::Kind::Or:
        for (const auto& child : c.children) {
          if (holds(child, tok)) return true;
        }
        return false;
    }
    return false;
  }

  /// All label bindings of every way `seq` covers exactly [s, e).
  std::set<Binding> decompositions(const SeqExpr& seq, const Document& doc, std::uint32_t s, std::uint32_t e) {
    std::set<Binding> out;
    Binding current;
    split(seq, 0, doc, s, e, current, out);
    return out;
  }

  void split(const SeqExpr& seq, std::size_t elem, const Document& doc, std::uint32_t at, std::uint32_t e,
             Binding& current, std::set<Binding>& out) {
    if (elem == seq.tokens.size()) {
      if (at == e) out.insert(current);
      return;
    }
    const auto& tok = seq.tokens[elem];
    std::uint32_t remaining = e - at;
    std::uint32_t hi = tok.quant.max ? std::min(*tok.quant.max, remaining) : remaining;
    for (std::uint32_t k = tok.quant.min; k <= hi; ++k) {
      bool all = true;
      for (std::uint32_t i = at; i < at + k && all; ++i) all = holds(tok.constraint, doc.tokens[i]);
      if (!all) break;  // longer runs include the failing token too
      bool binds = tok.label && tok.quant.is_one();
      if (binds) current[*tok.label] = at;
      split(seq, elem + 1, doc, at + k, e, current, out);
      if (binds) current.erase(*tok.label);
    }
  }

  bool satisfiable(const std::vector<std::vector<Binding>>& scope_binds, std::size_t i, const Binding& acc,
                   const Document& doc) {
    if (i == scope_binds.size()) return conditions_hold(acc, doc);
    for (const auto& b : scope_binds[i]) {
      Binding merged = acc;
      merged.insert(b.begin(), b.end());
      if (satisfiable(scope_binds, i + 1, merged, doc)) return true;
    }
    return false;
  }

  bool conditions_hold(const Binding& b, const Document& doc) const {
    for (const auto& g : q_.conditions) {
      auto l = b.find(g.left.label);
      auto r = b.find(g.right.label);
      if (l == b.end() || r == b.end()) return false;
      bool same = doc.tokens[l->second].get(g.left.attr) == doc.tokens[r->second].get(g.right.attr);
      if (same != (g.op == CompareOp::Equal)) return false;
    }
    return true;
  }
};

}  // namespace

HitSet brute_force_execute(const Query& q, const AnnotatedCorpus& c) {
  if (c.token_count() > kBruteForceTokenLimit) {
    throw CorpusTooLarge("brute-force evaluation is limited to " + std::to_string(kBruteForceTokenLimit) +
                         " tokens");
  }
  check_attributes(q);
  return BruteForce(q, c).run();
}

}  // namespace cqlkit
