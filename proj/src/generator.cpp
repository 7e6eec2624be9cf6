#include "cqlkit/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cqlkit/engine.hpp"
#include "cqlkit/parser.hpp"
#include "cqlkit/pattern.hpp"
#include "cqlkit/printer.hpp"

namespace cqlkit {

// ---------------------------------------------------------------------------
// Inputs

bool Collocation::valid() const {
  if (items.empty() || items.front().gap || items.back().gap) return false;
  std::size_t words = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].gap) {
      if (i > 0 && items[i - 1].gap) return false;
    } else {
      if (items[i].word.empty() || items[i].pos.empty()) return false;
      ++words;
    }
  }
  return words >= 2;
}

std::vector<const CollocationItem*> Collocation::words() const {
  std::vector<const CollocationItem*> out;
  for (const auto& it : items) {
    if (!it.gap) out.push_back(&it);
  }
  return out;
}

std::string to_string(const Collocation& c) {
  std::string out;
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    if (i) out += '\t';
    out += c.items[i].gap ? "X" : c.items[i].word + "/" + c.items[i].pos;
  }
  return out;
}

Collocation parse_collocation(const std::string& line) {
  Collocation c;
  std::size_t from = 0;
  while (from <= line.size()) {
    auto tab = line.find('\t', from);
    std::string item = line.substr(from, tab == std::string::npos ? std::string::npos : tab - from);
    if (item == "X") {
      c.items.push_back(CollocationItem::make_gap());
    } else {
      auto slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
        throw std::invalid_argument("collocation item '" + item + "' is not word/pos or X");
      }
      c.items.push_back(CollocationItem::make_word(item.substr(0, slash), item.substr(slash + 1)));
    }
    if (tab == std::string::npos) break;
    from = tab + 1;
  }
  if (!c.valid()) {
    throw std::invalid_argument("collocation needs >= 2 words and no leading, trailing or doubled X");
  }
  return c;
}

std::vector<Collocation> read_collocations(std::istream& in) {
  std::vector<Collocation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_collocation(line));
    } catch (const std::invalid_argument& e) {
      throw FormatError(lineno, e.what());
    }
  }
  return out;
}

void SynonymLexicon::add(const std::string& word, const std::string& syn) {
  if (word == syn || syn.empty()) return;
  auto& list = entries_[word];
  if (std::find(list.begin(), list.end(), syn) == list.end()) list.push_back(syn);
}

const std::vector<std::string>& SynonymLexicon::synonyms(const std::string& word) const {
  static const std::vector<std::string> kNone;
  auto it = entries_.find(word);
  return it == entries_.end() ? kNone : it->second;
}

SynonymLexicon read_synonyms(std::istream& in) {
  SynonymLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    for (std::size_t i = 1; i < cols.size(); ++i) lex.add(cols[0], cols[i]);
  }
  return lex;
}

const char* to_string(MutationForm f) {
  switch (f) {
    case MutationForm::W: return "W";
    case MutationForm::P: return "P";
    case MutationForm::WAP: return "WAP";
    case MutationForm::WOP: return "WOP";
    case MutationForm::WW: return "WW";
    case MutationForm::WWP: return "WWP";
  }
  return "W";
}

const char* to_string(WithinForm f) {
  switch (f) {
    case WithinForm::Subquery: return "subquery";
    case WithinForm::Structure: return "structure";
    case WithinForm::Nested: return "nested";
  }
  return "subquery";
}

ClassMix parse_mix(const std::string& text) {
  ClassMix mix{0, 0, 0};
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("mix entry '" + part + "' is not class:weight");
    auto cls = query_class_from_string(part.substr(0, colon));
    if (!cls) throw std::invalid_argument("unknown query class '" + part.substr(0, colon) + "'");
    double value = 0;
    try {
      value = std::stod(part.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad weight in mix entry '" + part + "'");
    }
    switch (*cls) {
      case QueryClass::Simple: mix.simple = value; break;
      case QueryClass::Within: mix.within = value; break;
      case QueryClass::Condition: mix.condition = value; break;
    }
  }
  GenConfig probe;
  probe.mix = mix;
  probe.validate();
  return mix;
}

void GenConfig::validate() const {
  for (double p : {mix.simple, mix.within, mix.condition, null_token_prob, nested_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probabilities must lie in [0,1]");
  }
  if (std::abs(mix.simple + mix.within + mix.condition - 1.0) > 1e-9) {
    throw std::invalid_argument("class mix must sum to 1");
  }
  if (quant_max_width == 0) throw std::invalid_argument("quantifier width must be positive");
}

// ---------------------------------------------------------------------------
// Token-level building blocks

Mutation mutate_token(const std::string& word, const std::string& pos, const SynonymLexicon& syn, Rng& rng,
                      std::optional<MutationForm> force) {
  static constexpr MutationForm kForms[] = {MutationForm::W,   MutationForm::P,  MutationForm::WAP,
                                            MutationForm::WOP, MutationForm::WW, MutationForm::WWP};
  MutationForm form = force ? *force : kForms[rng.uniform(6)];
  const auto& synonyms = syn.synonyms(word);
  if ((form == MutationForm::WW || form == MutationForm::WWP) && synonyms.empty()) form = MutationForm::W;

  auto w = [&] { return Constraint::make_atom("word", CompareOp::Equal, regex_escape(word)); };
  auto p = [&] { return Constraint::make_atom("pos", CompareOp::Equal, regex_escape(pos)); };
  switch (form) {
    case MutationForm::W: return {w(), form};
    case MutationForm::P: return {p(), form};
    case MutationForm::WAP: return {Constraint::make_and({w(), p()}), form};
    case MutationForm::WOP: return {Constraint::make_or({w(), p()}), form};
    case MutationForm::WW:
    case MutationForm::WWP: {
      const auto& other = synonyms[rng.uniform(synonyms.size())];
      auto either = Constraint::make_or({w(), Constraint::make_atom("word", CompareOp::Equal, regex_escape(other))});
      if (form == MutationForm::WW) return {std::move(either), form};
      return {Constraint::make_and({std::move(either), p()}), form};
    }
  }
  return {w(), MutationForm::W};
}

std::vector<Quantifier> null_token_quantifiers(const GenConfig& cfg) {
  std::vector<Quantifier> out = {Quantifier::optional()};
  for (std::uint32_t m = 0; m <= cfg.quant_max_min; ++m) {
    for (std::uint32_t n = m + 1; n <= m + cfg.quant_max_width; ++n) out.push_back(Quantifier::range(m, n));
  }
  return out;
}

SeqExpr insert_null_token(SeqExpr seq, Rng& rng, const GenConfig& cfg, std::optional<Quantifier> force) {
  Quantifier q;
  if (force) {
    q = *force;
  } else {
    auto options = null_token_quantifiers(cfg);
    q = options[rng.uniform(options.size())];
  }
  seq.tokens.push_back(TokenExpr{std::nullopt, Constraint::empty(), q});
  return seq;
}

namespace {

/// Left-to-right walk over the collocation: mutate each word, then add a
/// null token (always before a gap marker, otherwise with probability
/// null_token_prob). Any word below min_freq abandons the whole draw.
std::optional<SeqExpr> simple_seq(const Collocation& col, const CorpusIndex& idx, const SynonymLexicon& syn,
                                  const GenConfig& cfg, Rng& rng, Provenance& prov) {
  SeqExpr seq;
  const auto& items = col.items;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (item.gap) continue;  // consumed by the preceding word
    if (idx.freq(item.word) + 1 <= cfg.min_freq) return std::nullopt;
    auto m = mutate_token(item.word, item.pos, syn, rng);
    seq.tokens.push_back(TokenExpr{std::nullopt, std::move(m.constraint), Quantifier::one()});
    prov.mutations.push_back(m.form);
    bool next_is_gap = i + 1 < items.size() && items[i + 1].gap;
    if (next_is_gap || rng.chance(cfg.null_token_prob)) {
      seq = insert_null_token(std::move(seq), rng, cfg);
      prov.null_tokens.push_back(canonical_print(seq.tokens.back().quant));
    }
  }
  prov.sources.push_back(col);
  return seq;
}

GenRecord finish(Query q, Provenance prov) {
  GenRecord r;
  r.cql = canonical_print(q);
  r.cls = classify(q);
  r.provenance = std::move(prov);
  return r;
}

constexpr const char* kStructureNames[] = {"s", "p", "doc"};

struct EligibleSentence {
  std::uint32_t doc;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};

std::vector<EligibleSentence> eligible_sentences(const CorpusIndex& idx, const GenConfig& cfg) {
  std::vector<EligibleSentence> out;
  const auto& docs = idx.corpus().docs;
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    const auto& toks = docs[d].tokens;
    for (const auto& [start, end] : idx.spans("s", d)) {
      EligibleSentence es{d, {}};
      for (std::uint32_t i = start; i < end; ++i) {
        for (std::uint32_t j = i + 1; j < end && j - i - 1 <= cfg.quant_max_width; ++j) {
          if (toks[i].pos == toks[j].pos || toks[i].word == toks[j].word) es.pairs.emplace_back(i, j);
        }
      }
      if (!es.pairs.empty()) out.push_back(std::move(es));
    }
  }
  return out;
}

GenRecord condition_from(const std::vector<EligibleSentence>& sentences, const CorpusIndex& idx, Rng& rng) {
  if (sentences.empty()) throw NoEligiblePair("no sentence contains two tokens with equal pos or word");
  const auto& sent = sentences[rng.uniform(sentences.size())];
  auto [i, j] = sent.pairs[rng.uniform(sent.pairs.size())];
  const auto& toks = idx.corpus().docs[sent.doc].tokens;

  std::vector<std::string> attrs;
  if (toks[i].pos == toks[j].pos) attrs.emplace_back("pos");
  if (toks[i].word == toks[j].word) attrs.emplace_back("word");
  std::string attr = attrs[rng.uniform(attrs.size())];
  bool letters = rng.chance(0.5);
  std::string a = letters ? "A" : "1";
  std::string b = letters ? "B" : "2";

  Query q;
  q.head.tokens.push_back(TokenExpr{a, Constraint::empty(), Quantifier::one()});
  std::uint32_t gap = j - i - 1;
  Provenance prov;
  prov.form = "pair";
  Quantifier between = gap <= 1 ? Quantifier::optional() : Quantifier::range(gap, gap);
  q.head.tokens.push_back(TokenExpr{std::nullopt, Constraint::empty(), between});
  prov.null_tokens.push_back(canonical_print(between));
  q.head.tokens.push_back(TokenExpr{b, Constraint::empty(), Quantifier::one()});
  q.withins.emplace_back(StructureTag{"s"});
  q.conditions.push_back(GlobalConstraint{{a, attr}, CompareOp::Equal, {b, attr}});
  prov.structure = "s";
  prov.pair = ConditionPair{sent.doc, i, j, attr};
  return finish(std::move(q), std::move(prov));
}

}  // namespace

std::optional<GenRecord> gen_simple(const Collocation& col, const CorpusIndex& idx, const SynonymLexicon& syn,
                                    const GenConfig& cfg, Rng& rng) {
  Provenance prov;
  prov.form = "simple";
  auto seq = simple_seq(col, idx, syn, cfg, rng, prov);
  if (!seq) return std::nullopt;
  Query q;
  q.head = std::move(*seq);
  return finish(std::move(q), std::move(prov));
}

std::optional<GenRecord> gen_within(const std::pair<Collocation, Collocation>& cols, const CorpusIndex& idx,
                                    const SynonymLexicon& syn, const GenConfig& cfg, Rng& rng,
                                    std::optional<WithinForm> force_form, std::optional<std::string> force_structure) {
  WithinForm form;
  if (force_form) {
    form = *force_form;
  } else if (rng.chance(0.5)) {
    form = WithinForm::Structure;
  } else {
    form = rng.chance(cfg.nested_prob) ? WithinForm::Nested : WithinForm::Subquery;
  }
  auto structure = [&] { return force_structure ? *force_structure : std::string(kStructureNames[rng.uniform(3)]); };

  Provenance prov;
  prov.form = to_string(form);
  Query q;
  auto first = simple_seq(cols.first, idx, syn, cfg, rng, prov);
  if (!first) return std::nullopt;
  if (form == WithinForm::Structure) {
    q.head = std::move(*first);
    prov.structure = structure();
    q.withins.emplace_back(StructureTag{*prov.structure});
    return finish(std::move(q), std::move(prov));
  }

  auto second = simple_seq(cols.second, idx, syn, cfg, rng, prov);
  if (!second) return std::nullopt;
  // The sequence that can reach fewer tokens goes before `within`;
  // unbounded sequences count as infinitely long.
  auto reach = [](const SeqExpr& s) {
    auto m = max_span_length(s);
    return m ? *m : std::numeric_limits<std::uint64_t>::max();
  };
  if (reach(*second) < reach(*first)) std::swap(first, second);
  q.head = std::move(*first);
  q.withins.emplace_back(std::move(*second));
  if (form == WithinForm::Nested) {
    prov.structure = structure();
    q.withins.emplace_back(StructureTag{*prov.structure});
  }
  return finish(std::move(q), std::move(prov));
}

GenRecord gen_condition(const CorpusIndex& idx, const GenConfig& cfg, Rng& rng) {
  return condition_from(eligible_sentences(idx, cfg), idx, rng);
}

std::map<QueryClass, std::size_t> class_counts(const ClassMix& mix, std::size_t n) {
  const std::pair<QueryClass, double> shares[] = {
      {QueryClass::Simple, mix.simple}, {QueryClass::Within, mix.within}, {QueryClass::Condition, mix.condition}};
  std::map<QueryClass, std::size_t> counts;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    double exact = shares[i].second * static_cast<double>(n);
    // Guard against 0.6 * 100 landing on 59.999...
    auto whole = static_cast<std::size_t>(std::floor(exact + 1e-9));
    counts[shares[i].first] = whole;
    assigned += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[shares[remainders[k % 3].second].first];
  return counts;
}

std::vector<GenRecord> generate_dataset(const CorpusIndex& idx, const std::vector<Collocation>& cols,
                                        const SynonymLexicon& syn, std::size_t n, const GenConfig& cfg) {
  if (n == 0) throw std::invalid_argument("dataset size must be at least 1");
  cfg.validate();
  Rng rng(cfg.seed);

  std::vector<QueryClass> plan;
  for (const auto& [cls, count] : class_counts(cfg.mix, n)) plan.insert(plan.end(), count, cls);
  for (std::size_t i = plan.size(); i > 1; --i) std::swap(plan[i - 1], plan[rng.uniform(i)]);

  std::optional<std::vector<EligibleSentence>> sentences;
  const std::size_t max_retries = 100 * n;
  std::size_t retries = 0;
  std::vector<GenRecord> out;
  out.reserve(n);

  for (QueryClass cls : plan) {
    while (true) {
      std::optional<GenRecord> rec;
      switch (cls) {
        case QueryClass::Simple:
          if (!cols.empty()) rec = gen_simple(cols[rng.uniform(cols.size())], idx, syn, cfg, rng);
          break;
        case QueryClass::Within:
          if (cols.size() >= 2) {
            std::size_t a = rng.uniform(cols.size());
            std::size_t b = rng.uniform(cols.size() - 1);
            if (b >= a) ++b;
            rec = gen_within({cols[a], cols[b]}, idx, syn, cfg, rng);
          } else if (cols.size() == 1) {
            rec = gen_within({cols[0], cols[0]}, idx, syn, cfg, rng, WithinForm::Structure);
          }
          break;
        case QueryClass::Condition:
          if (!sentences) sentences = eligible_sentences(idx, cfg);
          if (!sentences->empty()) rec = condition_from(*sentences, idx, rng);
          break;
      }
      if (rec && cfg.require_hits && execute(parse(rec->cql), idx, 1).hits.empty()) rec.reset();
      if (rec) {
        out.push_back(std::move(*rec));
        break;
      }
      if (++retries > max_retries) {
        throw ExhaustedInputs("gave up after " + std::to_string(max_retries) + " rejected draws (" +
                              std::to_string(out.size()) + " of " + std::to_string(n) + " records generated)");
      }
    }
  }
  return out;
}

std::vector<std::pair<Collocation, std::size_t>> extract_collocations_naive(const CorpusIndex& idx, int window) {
  if (window < 1 || window > 5) throw std::invalid_argument("collocation window must be in [1,5]");
  std::map<Collocation, std::size_t, decltype([](const Collocation& a, const Collocation& b) {
             return a.items < b.items;
           })>
      counts;
  const auto& docs = idx.corpus().docs;
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    const auto& toks = docs[d].tokens;
    for (const auto& [start, end] : idx.spans("s", d)) {
      for (std::uint32_t i = start; i < end; ++i) {
        for (std::uint32_t j = i + 1; j < end && j - i <= static_cast<std::uint32_t>(window); ++j) {
          Collocation c;
          c.items.push_back(CollocationItem::make_word(toks[i].word, toks[i].pos));
          if (j - i >= 2) c.items.push_back(CollocationItem::make_gap());
          c.items.push_back(CollocationItem::make_word(toks[j].word, toks[j].pos));
          ++counts[c];
        }
      }
    }
  }
  std::vector<std::pair<Collocation, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return to_string(a.first) < to_string(b.first);
  });
  return out;
}

}  // namespace cqlkit
