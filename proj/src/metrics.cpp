#include "cqlkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cqlkit/lexer.hpp"
#include "cqlkit/parser.hpp"
#include "cqlkit/printer.hpp"
#include "cqlkit/signature.hpp"

namespace cqlkit {

MetricWeights::MetricWeights(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("metric weights must lie in [0,1]");
  }
  if (std::abs(alpha + beta - 1.0) > 1e-9) throw std::invalid_argument("metric weights must sum to 1");
}

namespace {

Query parse_gold(std::string_view gold) {
  try {
    return parse(gold);
  } catch (const ParseError& e) {
    throw GoldInvalid(std::string("gold query does not parse: ") + e.what());
  }
}

double similarity(const Query& cand, const Query& ref) {
  std::vector<NodeSignature> ref_sigs;
  for (auto& n : signature_nodes(ref)) {
    if (!n.is_leaf) ref_sigs.push_back(std::move(n.signature));
  }
  std::sort(ref_sigs.begin(), ref_sigs.end());
  std::size_t total = 0;
  std::size_t matched = 0;
  for (const auto& n : signature_nodes(cand)) {
    if (n.is_leaf) continue;
    ++total;
    if (std::binary_search(ref_sigs.begin(), ref_sigs.end(), n.signature)) ++matched;
  }
  // Every query has at least Query, Seq and Token as non-leaf nodes.
  return static_cast<double>(matched) / static_cast<double>(total);
}

}  // namespace

int exact_match(std::string_view pred, std::string_view gold) {
  std::string gold_norm = canonical_print(parse_gold(gold));
  auto q = try_parse(pred);
  return q && canonical_print(*q) == gold_norm ? 1 : 0;
}

int valid_accuracy(std::string_view pred) { return try_parse(pred) ? 1 : 0; }

std::vector<std::string> bleu_tokens(std::string_view query) {
  std::vector<std::string> out;
  auto q = try_parse(query);
  std::string text = q ? canonical_print(*q) : std::string(query);
  for (auto& t : lex(text)) out.push_back(std::move(t.text));
  return out;
}

double bleu_score(const std::vector<std::string>& cand, const std::vector<std::string>& ref, int max_n) {
  if (cand.empty() || max_n < 1) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::vector<std::string>, int> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[{ref.begin() + i, ref.begin() + i + n}];
    std::map<std::vector<std::string>, int> cand_counts;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) ++cand_counts[{cand.begin() + i, cand.begin() + i + n}];
    long total = cand.size() >= static_cast<std::size_t>(n) ? static_cast<long>(cand.size()) - n + 1 : 0;
    long clipped = 0;
    for (const auto& [gram, count] : cand_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) clipped += std::min(count, it->second);
    }
    double p = clipped > 0 ? static_cast<double>(clipped) / static_cast<double>(total)
                           : 1.0 / static_cast<double>(total + 1);
    log_sum += std::log(p);
  }
  double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size())));
  return bp * std::exp(log_sum / max_n);
}

double bleu(std::string_view pred, std::string_view gold, int max_n) {
  return bleu_score(bleu_tokens(pred), bleu_tokens(gold), max_n);
}

double tree_similarity(std::string_view pred, std::string_view gold) {
  Query ref = parse_gold(gold);
  auto cand = try_parse(pred);
  if (!cand) return 0.0;
  return similarity(*cand, ref);
}

double cqlbleu(std::string_view pred, std::string_view gold, const MetricWeights& w) {
  double ts = tree_similarity(pred, gold);
  return w.alpha() * bleu(pred, gold) + w.beta() * ts;
}

MetricScore score_record(std::string_view pred, std::string_view gold, const CorpusIndex* corpus,
                         const MetricWeights& w, std::size_t limit) {
  Query ref = parse_gold(gold);
  MetricScore s;
  auto cand = try_parse(pred);
  s.va = cand ? 1 : 0;
  s.em = cand && canonical_print(*cand) == canonical_print(ref) ? 1 : 0;
  s.bleu = bleu(pred, gold);
  s.ts = cand ? similarity(*cand, ref) : 0.0;
  s.cqlbleu = w.alpha() * s.bleu + w.beta() * s.ts;
  if (corpus) {
    auto outcome = execution_accuracy(pred, gold, *corpus, limit);
    s.ex = outcome.correct ? 1 : 0;
    s.warning = std::move(outcome.warning);
  }
  return s;
}

}  // namespace cqlkit
