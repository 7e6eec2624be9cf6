#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"
#include "support/stats_fixture.hpp"

namespace cqlkit {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string dataset_text() {
  std::ostringstream out;
  write_dataset(testing::stats_fixture(), out);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = "<doc id=\"t\">\n<s>\na\tDT\nbook\tNN\nreads\tVBZ\n</s>\n</doc>\n";

TEST(Cli, ParseOk) {
  auto r = run({"parse", R"([lemma="teapot"])"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("class: simple"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ParseError) {
  auto r = run({"parse", "[word="});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("offset 6"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("^"), std::string::npos);
}

TEST(Cli, ParseJson) {
  auto r = run({"parse", "--json", "1:[] 2:[] :: 1.pos = 2.pos"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["class"], "condition");
  EXPECT_EQ(j["canonical"], "1:[] 2:[] :: 1.pos = 2.pos");
  EXPECT_EQ(j["ast"]["head"]["tokens"].size(), 2u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"parse"}).code, 2);
  EXPECT_EQ(run({"eval", "--gold", "x"}).code, 2);
  auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("exec"), std::string::npos);
}

TEST(Cli, Exec) {
  testing::TempFile corpus(kTiny, ".vert");
  auto r = run({"exec", "[]", corpus.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\t0\t1\ta\n0\t1\t2\tbook\n0\t2\t3\treads\n3 hits\n");

  auto none = run({"exec", "[word='zzz']", corpus.path()});
  EXPECT_EQ(none.code, 0);
  EXPECT_EQ(none.out, "0 hits\n");

  auto json = run({"exec", "--json", "[pos='N.*'] []", corpus.path()});
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["total"], 1);
  EXPECT_EQ(j["hits"][0]["text"], "book reads");
}

TEST(Cli, ExecErrors) {
  testing::TempFile corpus(kTiny, ".vert");
  testing::TempFile broken("<doc id=\"t\">\n<s>\na\n</s>\n</doc>\n", ".vert");
  EXPECT_EQ(run({"exec", "[]", "/nonexistent/corpus.vert"}).code, 3);
  EXPECT_EQ(run({"exec", "[]", broken.path()}).code, 3);
  EXPECT_EQ(run({"exec", "[word=", corpus.path()}).code, 1);
  auto unknown = run({"exec", "[tag='x']", corpus.path()});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_TRUE(unknown.out.empty());
}

TEST(Cli, ExecLimitAndEnv) {
  testing::TempFile corpus(kTiny, ".vert");
  auto r = run({"exec", "--limit", "2", "[]", corpus.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2 hits (truncated)"), std::string::npos);
  EXPECT_NE(r.err.find("truncated"), std::string::npos);

  ::setenv("CQLKIT_LIMIT", "1", 1);
  auto env = run({"exec", "[]", corpus.path()});
  ::unsetenv("CQLKIT_LIMIT");
  EXPECT_NE(env.out.find("1 hits (truncated)"), std::string::npos);
}

TEST(Cli, EvalIdentity) {
  testing::TempFile gold(dataset_text(), ".jsonl");
  std::string preds;
  for (const auto& r : testing::stats_fixture()) {
    preds += nlohmann::json{{"id", r.id}, {"pred", r.cql}}.dump() + "\n";
  }
  testing::TempFile pred(preds, ".jsonl");
  auto r = run({"eval", "--gold", gold.path(), "--pred", pred.path()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("overall          5   100.00   100.00   100.00"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("EX"), std::string::npos);

  testing::TempFile corpus(testing::eval_corpus(), ".vert");
  auto j = run({"eval", "--gold", gold.path(), "--pred", pred.path(), "--corpus", corpus.path(), "--json"});
  ASSERT_EQ(j.code, 0) << j.err;
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["overall"]["ex"], 1.0);
  EXPECT_EQ(doc["overall"]["cqlbleu"], 1.0);
}

TEST(Cli, EvalErrors) {
  testing::TempFile gold(dataset_text(), ".jsonl");
  testing::TempFile dangling(R"({"id":"nope","pred":"[]"})" "\n", ".jsonl");
  EXPECT_EQ(run({"eval", "--gold", gold.path(), "--pred", dangling.path()}).code, 1);
  EXPECT_EQ(run({"eval", "--gold", gold.path(), "--pred", gold.path(), "--alpha", "0.7"}).code, 2);
  testing::TempFile empty("", ".jsonl");
  EXPECT_EQ(run({"eval", "--gold", gold.path(), "--pred", empty.path(), "--corpus", "/nonexistent"}).code, 3);
}

TEST(Cli, Stats) {
  testing::TempFile data(dataset_text(), ".jsonl");
  auto r = run({"stats", data.path()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("within           1    24.00    52.00     4.00     5.00    12.00     3.00"), std::string::npos)
      << r.out;
  auto j = nlohmann::json::parse(run({"stats", "--json", data.path()}).out);
  EXPECT_DOUBLE_EQ(j["overall"]["nl_chars"].get<double>(), 22.2);
}

TEST(Cli, GenAndDeterminism) {
  std::ostringstream vert;
  write_vertical(testing::generation_corpus(), vert);
  testing::TempFile corpus(vert.str(), ".vert");
  testing::TempFile out_a("", ".jsonl");
  testing::TempFile out_b("", ".jsonl");
  auto a = run({"gen", "--corpus", corpus.path(), "--n", "100", "--mix", "simple:0.6,within:0.25,condition:0.15",
                "--seed", "7", "--out", out_a.path()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("condition 15, simple 60, within 25"), std::string::npos) << a.out;
  run({"gen", "--corpus", corpus.path(), "--n", "100", "--seed", "7", "--out", out_b.path()});
  EXPECT_EQ(slurp(out_a.path()), slurp(out_b.path()));

  auto stdout_run = run({"gen", "--corpus", corpus.path(), "--n", "10"});
  EXPECT_EQ(std::count(stdout_run.out.begin(), stdout_run.out.end(), '\n'), 10);
}

TEST(Cli, GenErrors) {
  std::ostringstream vert;
  write_vertical(testing::generation_corpus(), vert);
  testing::TempFile corpus(vert.str(), ".vert");
  testing::TempFile rare("rare/JJ\tbook/NN\n", ".tsv");
  EXPECT_EQ(run({"gen", "--corpus", corpus.path(), "--collocations", rare.path(), "--n", "5", "--mix",
                 "simple:1,within:0,condition:0"})
                .code,
            4);
  EXPECT_EQ(run({"gen", "--corpus", corpus.path(), "--mix", "simple:2"}).code, 2);
  EXPECT_EQ(run({"gen", "--corpus", "/nonexistent"}).code, 3);
}

TEST(Cli, Collocations) {
  testing::TempFile corpus(kTiny, ".vert");
  auto r = run({"collocations", corpus.path(), "--window", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("a/DT\tX\treads/VBZ"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace cqlkit
