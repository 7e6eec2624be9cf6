#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqlkit/ast.hpp"
#include "cqlkit/corpus.hpp"

namespace cqlkit {

/// Deterministic random stream. Draws are derived from raw 64-bit outputs
/// so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t uniform(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

struct CollocationItem {
  bool gap = false;
  std::string word;
  std::string pos;

  static CollocationItem make_word(std::string word, std::string pos) { return {false, std::move(word), std::move(pos)}; }
  static CollocationItem make_gap() { return {true, {}, {}}; }

  bool operator==(const CollocationItem&) const = default;
  auto operator<=>(const CollocationItem&) const = default;
};

/// Ordered (word, pos) items with optional "X" gap markers between them.
struct Collocation {
  std::vector<CollocationItem> items;

  /// At least two words, no gap at either end, no two gaps in a row.
  bool valid() const;
  std::vector<const CollocationItem*> words() const;

  bool operator==(const Collocation&) const = default;
};

/// `word/pos<TAB>X<TAB>word/pos` (split at the last '/').
std::string to_string(const Collocation& c);
Collocation parse_collocation(const std::string& line);

/// One collocation per line; blank lines and `#` comments skipped.
/// Throws FormatError.
std::vector<Collocation> read_collocations(std::istream& in);

class SynonymLexicon {
 public:
  /// Adds `syn` as a synonym of `word`; self-entries and repeats are ignored.
  void add(const std::string& word, const std::string& syn);
  const std::vector<std::string>& synonyms(const std::string& word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// `word<TAB>syn1<TAB>syn2...` per line.
SynonymLexicon read_synonyms(std::istream& in);

enum class MutationForm { W, P, WAP, WOP, WW, WWP };
const char* to_string(MutationForm f);

enum class WithinForm { Subquery, Structure, Nested };
const char* to_string(WithinForm f);

struct ClassMix {
  double simple = 0.6;
  double within = 0.25;
  double condition = 0.15;
};

/// "simple:0.6,within:0.25,condition:0.15"; throws std::invalid_argument.
ClassMix parse_mix(const std::string& text);

struct GenConfig {
  std::uint64_t seed = 7;
  ClassMix mix;
  double null_token_prob = 0.5;
  std::uint32_t quant_max_min = 4;
  std::uint32_t quant_max_width = 7;
  std::size_t min_freq = 6;  // words with freq < min_freq abandon the collocation
  bool require_hits = false;
  double nested_prob = 0.2;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct ConditionPair {
  std::uint32_t doc = 0;
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  std::string attr;
};

struct Provenance {
  std::string form;  // simple | subquery | structure | nested | pair
  std::vector<Collocation> sources;
  std::vector<MutationForm> mutations;
  std::vector<std::string> null_tokens;  // quantifier text of every inserted []
  std::optional<std::string> structure;
  std::optional<ConditionPair> pair;
};

struct GenRecord {
  std::string cql;  // canonical
  QueryClass cls = QueryClass::Simple;
  Provenance provenance;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoEligiblePair : public GenerationError {
 public:
  using GenerationError::GenerationError;
};

class ExhaustedInputs : public GenerationError {
 public:
  using GenerationError::GenerationError;
};

struct Mutation {
  Constraint constraint;
  MutationForm form;  // the form actually applied, after synonym fallback
};

/// One of the six token forms, uniformly unless `force` is given. WW and
/// WWP fall back to W when `word` has no synonym.
Mutation mutate_token(const std::string& word, const std::string& pos, const SynonymLexicon& syn, Rng& rng,
                      std::optional<MutationForm> force = std::nullopt);

/// All quantifiers the null token may carry: `?` followed by every {m,n}
/// with 0 <= m <= max_min and m < n <= m + max_width.
std::vector<Quantifier> null_token_quantifiers(const GenConfig& cfg);

/// Appends `[]` with a uniformly drawn (or forced) quantifier.
SeqExpr insert_null_token(SeqExpr seq, Rng& rng, const GenConfig& cfg,
                          std::optional<Quantifier> force = std::nullopt);

/// Simple query from one collocation; nullopt when a word is too rare.
std::optional<GenRecord> gen_simple(const Collocation& col, const CorpusIndex& idx, const SynonymLexicon& syn,
                                    const GenConfig& cfg, Rng& rng);

/// Within query from two collocations. `force_form` and `force_structure`
/// pin the random choices (tests).
std::optional<GenRecord> gen_within(const std::pair<Collocation, Collocation>& cols, const CorpusIndex& idx,
                                    const SynonymLexicon& syn, const GenConfig& cfg, Rng& rng,
                                    std::optional<WithinForm> force_form = std::nullopt,
                                    std::optional<std::string> force_structure = std::nullopt);

/// Condition query from a random equal-pos or equal-word token pair inside
/// one sentence. Throws NoEligiblePair.
GenRecord gen_condition(const CorpusIndex& idx, const GenConfig& cfg, Rng& rng);

/// Exactly n records, class counts by largest remainder over cfg.mix,
/// abandoned draws retried. Throws ExhaustedInputs after 100 * n retries.
std::vector<GenRecord> generate_dataset(const CorpusIndex& idx, const std::vector<Collocation>& cols,
                                        const SynonymLexicon& syn, std::size_t n, const GenConfig& cfg);

/// Per-class record counts for n records under `mix`.
std::map<QueryClass, std::size_t> class_counts(const ClassMix& mix, std::size_t n);

/// (word, pos) pairs co-occurring in a sentence at distance 1..window;
/// distance >= 2 is encoded with one gap. Sorted by count, then text.
std::vector<std::pair<Collocation, std::size_t>> extract_collocations_naive(const CorpusIndex& idx, int window);

}  // namespace cqlkit
