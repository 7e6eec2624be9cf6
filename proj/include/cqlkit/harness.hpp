#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqlkit/ast.hpp"
#include "cqlkit/corpus.hpp"
#include "cqlkit/generator.hpp"
#include "cqlkit/metrics.hpp"

namespace cqlkit {

struct DatasetRecord {
  std::string id;
  std::string nl;
  std::string cql;
  QueryClass cls = QueryClass::Simple;
  std::string lang = "en";
};

struct PredictionRecord {
  std::string id;
  std::string pred;
};

class HarnessError : public std::runtime_error {
 public:
  HarnessError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

class DuplicateId : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

class DanglingPredictionId : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

/// Dataset JSONL: {"id","nl","cql","class","lang"} per line. With
/// `validate_cql` every cql must parse and classify as its class field;
/// without it only the JSON shape is checked (statistics over raw data).
std::vector<DatasetRecord> read_dataset(std::istream& in, bool validate_cql = true);
std::vector<DatasetRecord> load_dataset(const std::string& path, bool validate_cql = true);

/// Predictions JSONL: {"id","pred"} per line; every id must exist in `gold`.
std::vector<PredictionRecord> read_predictions(std::istream& in, const std::vector<DatasetRecord>& gold);
std::vector<PredictionRecord> load_predictions(const std::string& path, const std::vector<DatasetRecord>& gold);

nlohmann::json to_json(const DatasetRecord& r);
void write_dataset(const std::vector<DatasetRecord>& records, std::ostream& out);

/// Generated records as dataset JSONL with ids q000001.. and an empty nl
/// field awaiting annotation; provenance is kept under "provenance".
void write_generated(const std::vector<GenRecord>& records, const std::string& lang, std::ostream& out);
nlohmann::json to_json(const Provenance& p);

struct MetricRow {
  std::size_t count = 0;
  double em = 0, va = 0, ex = 0, bleu = 0, ts = 0, cqlbleu = 0;  // fractions
};

struct RecordResult {
  std::string id;
  QueryClass cls;
  MetricScore score;
};

struct MetricReport {
  bool has_ex = false;
  std::map<QueryClass, MetricRow> classes;
  MetricRow overall;
  std::vector<RecordResult> records;
  std::size_t excluded = 0;
  std::size_t missing_predictions = 0;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  MetricWeights weights;
  std::size_t limit = kDefaultHitLimit;
  std::size_t jobs = 1;
};

/// Scores every gold record against its prediction (missing predictions
/// score as the empty string). Records whose gold fails to parse or
/// execute are excluded from the aggregate and reported as warnings.
MetricReport evaluate(const std::vector<DatasetRecord>& gold, const std::vector<PredictionRecord>& preds,
                      const CorpusIndex* corpus, const EvalOptions& opts = {});

/// Round half up to two decimals of a percentage.
std::string format_percent(double fraction);

std::string render_report(const MetricReport& r);
nlohmann::json to_json(const MetricReport& r);

struct ClassStats {
  std::size_t count = 0;        // records of the class
  std::size_t unparseable = 0;  // excluded from the averages
  // Averages over parseable records; absent for an empty class.
  std::optional<double> nl_chars, cql_chars, token_exprs, ast_depth, ast_nodes, atoms;
};

struct DatasetStats {
  std::map<QueryClass, ClassStats> classes;
  ClassStats overall;
};

DatasetStats compute_stats(const std::vector<DatasetRecord>& gold);

std::string render_stats(const DatasetStats& s);
nlohmann::json to_json(const DatasetStats& s);

}  // namespace cqlkit
