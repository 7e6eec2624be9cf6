#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cqlkit/ast.hpp"
#include "cqlkit/corpus.hpp"

namespace cqlkit {

inline constexpr std::size_t kDefaultHitLimit = 100000;

class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownAttribute : public ExecutionError {
 public:
  explicit UnknownAttribute(const std::string& attr)
      : ExecutionError("attribute '" + attr + "' is not present in the corpus"), attr_(attr) {}
  const std::string& attr() const { return attr_; }

 private:
  std::string attr_;
};

class CorpusTooLarge : public ExecutionError {
 public:
  using ExecutionError::ExecutionError;
};

/// One matched span of a document. Bindings map labels of the head
/// sequence to the token they bound; they do not take part in equality.
struct Hit {
  std::uint32_t doc_id = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;  // exclusive
  std::map<std::string, std::uint32_t> bindings;

  auto key() const { return std::tie(doc_id, start, end); }
  bool operator==(const Hit& o) const { return key() == o.key(); }
  bool operator<(const Hit& o) const { return key() < o.key(); }
};

/// Distinct hits ordered by (doc, start, end).
struct HitSet {
  std::vector<Hit> hits;
  bool truncated = false;

  bool same_spans(const HitSet& other) const { return hits == other.hits; }
};

/// Runs `q` against the index. Hits are produced in (doc, start, end)
/// order; when more than `limit` exist the first `limit` are returned and
/// `truncated` is set. Throws UnknownAttribute or RegexError.
HitSet execute(const Query& q, const CorpusIndex& idx, std::size_t limit = kDefaultHitLimit);

/// Reference evaluator that enumerates every span, every quantifier
/// decomposition and every label binding directly on the token array.
/// Never truncates. Throws CorpusTooLarge above 10,000 tokens.
HitSet brute_force_execute(const Query& q, const AnnotatedCorpus& c);

inline constexpr std::size_t kBruteForceTokenLimit = 10000;

class GoldInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GoldExecutionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExecutionOutcome {
  bool correct = false;
  /// Set when the comparison could not be decided (gold truncated).
  std::optional<std::string> warning;
};

/// EX for one pair: correct iff pred parses and executes, neither side is
/// truncated, and both hit sets hold the same (doc, start, end) spans.
/// Throws GoldInvalid / GoldExecutionFailed for a bad gold query.
ExecutionOutcome execution_accuracy(std::string_view pred, std::string_view gold, const CorpusIndex& idx,
                                    std::size_t limit = kDefaultHitLimit);

/// Rejects attributes the corpus cannot answer; used by both evaluators.
void check_attributes(const Query& q);

}  // namespace cqlkit
