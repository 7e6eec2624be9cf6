#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqlkit/corpus.hpp"
#include "cqlkit/engine.hpp"

namespace cqlkit {

/// Weights of the BLEU and tree-similarity terms; alpha + beta must be 1.
class MetricWeights {
 public:
  MetricWeights() = default;
  /// Throws std::invalid_argument unless both lie in [0,1] and sum to 1.
  MetricWeights(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double alpha_ = 0.5;
  double beta_ = 0.5;
};

struct MetricScore {
  int em = 0;
  int va = 0;
  std::optional<int> ex;
  double bleu = 0.0;
  double ts = 0.0;
  double cqlbleu = 0.0;
  std::optional<std::string> warning;
};

/// 1 iff both normalize to the same canonical text. Throws GoldInvalid.
int exact_match(std::string_view pred, std::string_view gold);

/// 1 iff `pred` parses.
int valid_accuracy(std::string_view pred);

/// Token stream BLEU is computed over: the lexer tokens of the canonical
/// form when `query` parses, of the raw text otherwise.
std::vector<std::string> bleu_tokens(std::string_view query);

/// BLEU of a candidate token stream against one reference: geometric mean
/// of clipped n-gram precisions (n = 1..max_n), each zero count replaced by
/// 1/(total+1), times min(1, exp(1 - |ref|/|cand|)). Empty candidate -> 0.
double bleu_score(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                  int max_n = 4);

double bleu(std::string_view pred, std::string_view gold, int max_n = 4);

/// Fraction of the candidate's non-leaf nodes whose signature occurs among
/// the reference's non-leaf node signatures. 0 when `pred` does not parse.
/// Throws GoldInvalid.
double tree_similarity(std::string_view pred, std::string_view gold);

/// alpha * bleu + beta * tree_similarity. Throws GoldInvalid.
double cqlbleu(std::string_view pred, std::string_view gold, const MetricWeights& w = {});

/// All metrics for one pair; ex is filled iff `corpus` is given.
/// Throws GoldInvalid / GoldExecutionFailed.
MetricScore score_record(std::string_view pred, std::string_view gold, const CorpusIndex* corpus,
                         const MetricWeights& w = {}, std::size_t limit = kDefaultHitLimit);

}  // namespace cqlkit
