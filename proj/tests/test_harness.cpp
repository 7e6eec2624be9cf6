#include <gtest/gtest.h>

#include <sstream>

#include "cqlkit/harness.hpp"
#include "support/fixtures.hpp"
#include "support/stats_fixture.hpp"

namespace cqlkit {
namespace {

std::string jsonl(const std::vector<DatasetRecord>& records) {
  std::ostringstream out;
  write_dataset(records, out);
  return out.str();
}

std::vector<PredictionRecord> preds_from(const std::string& text, const std::vector<DatasetRecord>& gold) {
  std::istringstream in(text);
  return read_predictions(in, gold);
}

template <typename E>
std::size_t failing_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_dataset(in);
  } catch (const E& e) {
    return e.line();
  }
  ADD_FAILURE() << "accepted: " << text;
  return 0;
}

CorpusIndex eval_index() {
  std::istringstream in(testing::eval_corpus());
  return build_index(ingest_vertical(in));
}

TEST(DatasetIo, RoundTrip) {
  auto records = testing::stats_fixture();
  std::istringstream in(jsonl(records));
  auto back = read_dataset(in);
  ASSERT_EQ(back.size(), 5u);
  EXPECT_EQ(back[4].nl, records[4].nl);
  EXPECT_EQ(back[4].lang, "zh");
  EXPECT_EQ(back[2].cls, QueryClass::Within);
}

TEST(DatasetIo, Validation) {
  const std::string ok = R"({"id":"a","nl":"x","cql":"[word='a']","class":"simple","lang":"en"})";
  EXPECT_EQ(failing_line<SchemaError>(ok + "\n" + R"({"id":"b","nl":"x","cql":"[word=","class":"simple","lang":"en"})"),
            2u);
  EXPECT_EQ(failing_line<SchemaError>(R"({"id":"b","nl":"x","cql":"[]","class":"within","lang":"en"})"), 1u);
  EXPECT_EQ(failing_line<SchemaError>(R"({"id":"b","nl":"x","cql":"[]","class":"odd","lang":"en"})"), 1u);
  EXPECT_EQ(failing_line<SchemaError>(R"({"id":"b","nl":"x","class":"simple","lang":"en"})"), 1u);
  EXPECT_EQ(failing_line<SchemaError>("{not json"), 1u);
  EXPECT_EQ(failing_line<DuplicateId>(ok + "\n\n" + ok), 3u);

  std::istringstream lenient(R"({"id":"b","nl":"x","cql":"[word=","class":"simple","lang":"en"})");
  EXPECT_EQ(read_dataset(lenient, false).size(), 1u);
}

TEST(DatasetIo, SchemaErrorNamesId) {
  std::istringstream in(R"({"id":"q42","nl":"x","cql":"[word=","class":"simple","lang":"en"})");
  try {
    read_dataset(in);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("q42"), std::string::npos) << e.what();
  }
}

TEST(Predictions, Loading) {
  auto gold = testing::stats_fixture();
  EXPECT_EQ(preds_from(R"({"id":"r1","pred":"[]"})" "\n" R"({"id":"r2","pred":""})", gold).size(), 2u);
  EXPECT_THROW(preds_from(R"({"id":"zz","pred":"[]"})", gold), DanglingPredictionId);
  EXPECT_THROW(preds_from(R"({"id":"r1","pred":"[]"})" "\n" R"({"id":"r1","pred":"[]"})", gold), DuplicateId);
  EXPECT_THROW(preds_from(R"({"id":"r1"})", gold), SchemaError);
}

TEST(Evaluate, Identity) {
  auto gold = testing::stats_fixture();
  std::vector<PredictionRecord> preds;
  for (const auto& r : gold) preds.push_back({r.id, r.cql});
  auto idx = eval_index();
  auto report = evaluate(gold, preds, &idx);
  EXPECT_TRUE(report.has_ex);
  for (const auto& row : {report.overall, report.classes.at(QueryClass::Simple)}) {
    EXPECT_EQ(format_percent(row.em), "100.00");
    EXPECT_EQ(format_percent(row.va), "100.00");
    EXPECT_EQ(format_percent(row.ex), "100.00");
    EXPECT_EQ(format_percent(row.cqlbleu), "100.00");
  }
}

TEST(Evaluate, AllUnparseable) {
  auto gold = testing::stats_fixture();
  std::vector<PredictionRecord> preds;
  double bleu_sum = 0;
  for (const auto& r : gold) {
    preds.push_back({r.id, r.cql + " ]"});
    bleu_sum += bleu(r.cql + " ]", r.cql);
  }
  auto idx = eval_index();
  auto report = evaluate(gold, preds, &idx);
  EXPECT_EQ(report.overall.va, 0.0);
  EXPECT_EQ(report.overall.em, 0.0);
  EXPECT_EQ(report.overall.ex, 0.0);
  EXPECT_NEAR(report.overall.cqlbleu, 0.5 * bleu_sum / 5, 1e-12);
}

TEST(Evaluate, HandComputedFixture) {
  auto gold = testing::stats_fixture();
  auto idx = eval_index();
  auto report = evaluate(gold, testing::eval_predictions(), &idx);
  const auto& s = report.classes.at(QueryClass::Simple);
  const auto& w = report.classes.at(QueryClass::Within);
  const auto& c = report.classes.at(QueryClass::Condition);
  EXPECT_EQ(s.count, 2u);
  EXPECT_EQ(w.count, 1u);
  EXPECT_EQ(c.count, 2u);
  EXPECT_DOUBLE_EQ(s.em, 0.5);
  EXPECT_DOUBLE_EQ(w.em, 0.0);
  EXPECT_DOUBLE_EQ(c.em, 0.5);
  EXPECT_DOUBLE_EQ(report.overall.em, 0.4);
  EXPECT_DOUBLE_EQ(c.va, 0.5);
  EXPECT_DOUBLE_EQ(report.overall.va, 0.8);
  EXPECT_DOUBLE_EQ(s.ex, 0.5);
  EXPECT_DOUBLE_EQ(w.ex, 0.0);
  EXPECT_DOUBLE_EQ(report.overall.ex, 0.4);
  const auto* v = testing::kEvalCqlBleu;
  EXPECT_NEAR(s.cqlbleu, (v[0] + v[1]) / 2, 1e-12);
  EXPECT_NEAR(w.cqlbleu, v[2], 1e-12);
  EXPECT_NEAR(c.cqlbleu, (v[3] + v[4]) / 2, 1e-12);
  EXPECT_NEAR(report.overall.cqlbleu, (v[0] + v[1] + v[2] + v[3] + v[4]) / 5, 1e-12);

  std::string table = render_report(report);
  EXPECT_NE(table.find("simple"), std::string::npos);
  EXPECT_NE(table.find("77.42"), std::string::npos) << table;
  EXPECT_NE(table.find("43.70"), std::string::npos) << table;
  EXPECT_NE(table.find("63.71"), std::string::npos) << table;
}

TEST(Evaluate, OverallIsWeightedMeanOfClasses) {
  auto gold = testing::stats_fixture();
  auto report = evaluate(gold, testing::eval_predictions(), nullptr);
  EXPECT_FALSE(report.has_ex);
  double weighted = 0;
  std::size_t n = 0;
  for (const auto& [cls, row] : report.classes) {
    weighted += row.cqlbleu * row.count;
    n += row.count;
  }
  EXPECT_EQ(n, gold.size());
  EXPECT_NEAR(report.overall.cqlbleu, weighted / n, 1e-12);
  EXPECT_EQ(render_report(report).find("EX"), std::string::npos);
}

TEST(Evaluate, JobsDoNotChangeResults) {
  auto gold = testing::stats_fixture();
  auto idx = eval_index();
  EvalOptions one, four;
  four.jobs = 4;
  auto a = to_json(evaluate(gold, testing::eval_predictions(), &idx, one)).dump();
  auto b = to_json(evaluate(gold, testing::eval_predictions(), &idx, four)).dump();
  EXPECT_EQ(a, b);
}

TEST(Evaluate, NoCrossRecordCoupling) {
  auto gold = testing::stats_fixture();
  auto preds = testing::eval_predictions();
  auto full = evaluate(gold, preds, nullptr);
  gold.erase(gold.begin() + 1);
  preds.erase(preds.begin() + 1);
  auto reduced = evaluate(gold, preds, nullptr);
  for (const auto& r : reduced.records) {
    auto it = std::find_if(full.records.begin(), full.records.end(), [&](const auto& x) { return x.id == r.id; });
    ASSERT_NE(it, full.records.end());
    EXPECT_EQ(it->score.cqlbleu, r.score.cqlbleu);
  }
}

TEST(Evaluate, MissingPredictionScoresEmpty) {
  auto gold = testing::stats_fixture();
  auto report = evaluate(gold, {}, nullptr);
  EXPECT_EQ(report.missing_predictions, 5u);
  EXPECT_EQ(report.overall.va, 0.0);
  EXPECT_EQ(report.overall.cqlbleu, 0.0);
}

TEST(Evaluate, BadGoldExcluded) {
  std::vector<DatasetRecord> gold = {{"a", "", "[word='x']", QueryClass::Simple, "en"},
                                     {"b", "", "[tag='x']", QueryClass::Simple, "en"}};
  auto idx = eval_index();
  auto report = evaluate(gold, {{"a", "[word='x']"}, {"b", "[tag='x']"}}, &idx);
  EXPECT_EQ(report.excluded, 1u);
  EXPECT_EQ(report.overall.count, 1u);
  EXPECT_FALSE(report.warnings.empty());
}

TEST(FormatPercent, HalfUp) {
  EXPECT_EQ(format_percent(0.12345), "12.35");
  EXPECT_EQ(format_percent(0.12344), "12.34");
  EXPECT_EQ(format_percent(1.0), "100.00");
  EXPECT_EQ(format_percent(0.0), "0.00");
  EXPECT_EQ(format_percent(2.0 / 3.0), "66.67");
}

TEST(Stats, Fixture) {
  auto stats = compute_stats(testing::stats_fixture());
  EXPECT_TRUE(testing::stats_equal(stats.classes.at(QueryClass::Simple), testing::expected_simple()));
  EXPECT_TRUE(testing::stats_equal(stats.classes.at(QueryClass::Within), testing::expected_within()));
  EXPECT_TRUE(testing::stats_equal(stats.classes.at(QueryClass::Condition), testing::expected_condition()));
  EXPECT_TRUE(testing::stats_equal(stats.overall, testing::expected_overall()));
}

TEST(Stats, SingleRecord) {
  auto stats = compute_stats({{"x", "", R"([word="book"])", QueryClass::Simple, "en"}});
  const auto& s = stats.classes.at(QueryClass::Simple);
  EXPECT_EQ(s.cql_chars, 13.0);
  EXPECT_EQ(s.token_exprs, 1.0);
  EXPECT_EQ(s.atoms, 1.0);
  EXPECT_FALSE(stats.classes.at(QueryClass::Within).cql_chars.has_value());
  EXPECT_NE(render_stats(stats).find("-"), std::string::npos);
  EXPECT_TRUE(to_json(stats)["classes"]["within"]["cql_chars"].is_null());
}

TEST(Stats, UnparseableCountedSeparately) {
  auto stats = compute_stats({{"x", "", R"([word="book"])", QueryClass::Simple, "en"},
                              {"y", "", R"([word=)", QueryClass::Simple, "en"}});
  EXPECT_EQ(stats.overall.unparseable, 1u);
  EXPECT_EQ(stats.overall.count, 2u);
  EXPECT_EQ(stats.overall.cql_chars, 13.0);
}

TEST(Generated, WriteGenerated) {
  GenRecord r;
  r.cql = R"([word="a"])";
  r.provenance.form = "simple";
  r.provenance.mutations = {MutationForm::W};
  std::ostringstream out;
  write_generated({r, r}, "en", out);
  std::istringstream in(out.str());
  auto back = read_dataset(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, "q000001");
  EXPECT_EQ(back[1].id, "q000002");
  auto first = nlohmann::json::parse(out.str().substr(0, out.str().find('\n')));
  EXPECT_EQ(first["provenance"]["mutations"][0], "W");
}

}  // namespace
}  // namespace cqlkit
