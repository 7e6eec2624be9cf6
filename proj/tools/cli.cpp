#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqlkit/ast_json.hpp"
#include "cqlkit/corpus.hpp"
#include "cqlkit/engine.hpp"
#include "cqlkit/generator.hpp"
#include "cqlkit/harness.hpp"
#include "cqlkit/metrics.hpp"
#include "cqlkit/parser.hpp"
#include "cqlkit/printer.hpp"

namespace cqlkit::cli {

using nlohmann::json;

namespace {

std::size_t default_limit() {
  if (const char* env = std::getenv("CQLKIT_LIMIT")) {
    try {
      auto v = std::stoull(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultHitLimit;
}

struct ParseArgs {
  std::string query;
  bool json = false;
};

struct ExecArgs {
  std::string query;
  std::string corpus;
  std::size_t limit = 0;
  bool json = false;
};

struct EvalArgs {
  std::string gold, pred, corpus;
  double alpha = 0.5, beta = 0.5;
  std::size_t limit = 0;
  std::size_t jobs = 1;
  bool json = false;
};

struct GenArgs {
  std::string corpus, collocations, synonyms, out, lang = "en";
  std::string mix = "simple:0.6,within:0.25,condition:0.15";
  std::size_t n = 100;
  std::uint64_t seed = 7;
  bool require_hits = false;
  bool json = false;
  int window = 3;
  std::size_t top = 0;
  double null_prob = 0.5;
  double nested_prob = 0.2;
  std::size_t min_freq = 6;
};

struct StatsArgs {
  std::string dataset;
  bool json = false;
};

struct CollocationArgs {
  std::string corpus;
  int window = 3;
  std::size_t top = 0;
  bool json = false;
};

int cmd_parse(const ParseArgs& a, std::ostream& out, std::ostream& err) {
  Query q;
  try {
    q = parse(a.query);
  } catch (const ParseError& e) {
    err << render_diagnostic(a.query, e) << '\n';
    return kQueryError;
  }
  for (const auto& attr : unknown_attributes(q)) err << "warning: unknown attribute '" << attr << "'\n";
  if (a.json) {
    json j{{"ok", true}, {"canonical", canonical_print(q)}, {"ast", to_json(q)}};
    j["class"] = to_string(classify(q));
    out << j.dump() << '\n';
  } else {
    out << "class: " << to_string(classify(q)) << "\n";
    out << "canonical: " << canonical_print(q) << "\n";
    out << render_tree(q);
  }
  return kOk;
}

int cmd_exec(const ExecArgs& a, std::ostream& out, std::ostream& err) {
  Query q;
  try {
    q = parse(a.query);
  } catch (const ParseError& e) {
    err << render_diagnostic(a.query, e) << '\n';
    return kQueryError;
  }
  std::optional<CorpusIndex> idx;
  try {
    idx.emplace(build_index(ingest_vertical_file(a.corpus)));
  } catch (const FormatError& e) {
    err << "error: corpus " << a.corpus << ": " << e.what() << '\n';
    return kCorpusError;
  }
  HitSet hits;
  try {
    hits = execute(q, *idx, a.limit ? a.limit : default_limit());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kQueryError;
  }
  const auto& docs = idx->corpus().docs;
  auto text_of = [&](const Hit& h) {
    std::string s;
    for (auto i = h.start; i < h.end; ++i) {
      if (i > h.start) s += ' ';
      s += docs[h.doc_id].tokens[i].word;
    }
    return s;
  };
  if (a.json) {
    json list = json::array();
    for (const auto& h : hits.hits) {
      list.push_back({{"doc", h.doc_id}, {"doc_name", docs[h.doc_id].id}, {"start", h.start}, {"end", h.end},
                      {"text", text_of(h)}, {"bindings", h.bindings}});
    }
    out << json{{"hits", list}, {"total", hits.hits.size()}, {"truncated", hits.truncated}}.dump() << '\n';
  } else {
    for (const auto& h : hits.hits) out << h.doc_id << '\t' << h.start << '\t' << h.end << '\t' << text_of(h) << '\n';
    out << hits.hits.size() << " hits" << (hits.truncated ? " (truncated)" : "") << '\n';
  }
  if (hits.truncated) err << "warning: hit limit reached; results truncated\n";
  return kOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  MetricWeights weights;
  try {
    weights = MetricWeights(a.alpha, a.beta);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::vector<DatasetRecord> gold;
  std::vector<PredictionRecord> preds;
  try {
    gold = load_dataset(a.gold);
    preds = load_predictions(a.pred, gold);
  } catch (const HarnessError& e) {
    err << "error: " << e.what() << '\n';
    return kQueryError;
  }
  std::optional<CorpusIndex> idx;
  if (!a.corpus.empty()) {
    try {
      idx.emplace(build_index(ingest_vertical_file(a.corpus)));
    } catch (const FormatError& e) {
      err << "error: corpus " << a.corpus << ": " << e.what() << '\n';
      return kCorpusError;
    }
  }
  EvalOptions opts;
  opts.weights = weights;
  opts.limit = a.limit ? a.limit : default_limit();
  opts.jobs = a.jobs;
  auto report = evaluate(gold, preds, idx ? &*idx : nullptr, opts);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (a.json) {
    out << to_json(report).dump(2) << '\n';
  } else {
    out << render_report(report);
  }
  return kOk;
}

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  GenConfig cfg;
  try {
    cfg.seed = a.seed;
    cfg.mix = parse_mix(a.mix);
    cfg.null_token_prob = a.null_prob;
    cfg.nested_prob = a.nested_prob;
    cfg.min_freq = a.min_freq;
    cfg.require_hits = a.require_hits;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::optional<CorpusIndex> idx;
  try {
    idx.emplace(build_index(ingest_vertical_file(a.corpus)));
  } catch (const FormatError& e) {
    err << "error: corpus " << a.corpus << ": " << e.what() << '\n';
    return kCorpusError;
  }
  std::vector<Collocation> cols;
  SynonymLexicon syn;
  try {
    if (!a.collocations.empty()) {
      std::ifstream in(a.collocations);
      if (!in) throw FormatError(0, "cannot open '" + a.collocations + "'");
      cols = read_collocations(in);
    } else {
      for (auto& [c, count] : extract_collocations_naive(*idx, a.window)) {
        if (a.top && cols.size() >= a.top) break;
        cols.push_back(std::move(c));
      }
    }
    if (!a.synonyms.empty()) {
      std::ifstream in(a.synonyms);
      if (!in) throw FormatError(0, "cannot open '" + a.synonyms + "'");
      syn = read_synonyms(in);
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kQueryError;
  }

  std::vector<GenRecord> records;
  try {
    records = generate_dataset(*idx, cols, syn, a.n, cfg);
  } catch (const ExhaustedInputs& e) {
    err << "error: " << e.what() << '\n';
    return kExhausted;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::map<std::string, std::size_t> per_class;
  for (const auto& r : records) ++per_class[to_string(r.cls)];
  if (a.out.empty()) {
    write_generated(records, a.lang, out);
    return kOk;
  }
  std::ofstream file(a.out, std::ios::binary);
  if (!file) {
    err << "error: cannot write '" << a.out << "'\n";
    return kQueryError;
  }
  write_generated(records, a.lang, file);
  if (a.json) {
    out << json{{"records", records.size()}, {"classes", per_class}, {"out", a.out}}.dump() << '\n';
  } else {
    out << "wrote " << records.size() << " records to " << a.out << " (";
    bool first = true;
    for (const auto& [cls, count] : per_class) {
      out << (first ? "" : ", ") << cls << " " << count;
      first = false;
    }
    out << ")\n";
  }
  return kOk;
}

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<DatasetRecord> data;
  try {
    data = load_dataset(a.dataset, /*validate_cql=*/false);
  } catch (const HarnessError& e) {
    err << "error: " << e.what() << '\n';
    return kQueryError;
  }
  auto stats = compute_stats(data);
  if (stats.overall.unparseable) err << "warning: " << stats.overall.unparseable << " record(s) do not parse\n";
  if (a.json) {
    out << to_json(stats).dump(2) << '\n';
  } else {
    out << render_stats(stats);
  }
  return kOk;
}

int cmd_collocations(const CollocationArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<CorpusIndex> idx;
  try {
    idx.emplace(build_index(ingest_vertical_file(a.corpus)));
  } catch (const FormatError& e) {
    err << "error: corpus " << a.corpus << ": " << e.what() << '\n';
    return kCorpusError;
  }
  auto cols = extract_collocations_naive(*idx, a.window);
  if (a.top && cols.size() > a.top) cols.resize(a.top);
  if (a.json) {
    json list = json::array();
    for (const auto& [c, count] : cols) list.push_back({{"collocation", to_string(c)}, {"count", count}});
    out << list.dump() << '\n';
  } else {
    for (const auto& [c, count] : cols) out << to_string(c) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cqlkit: corpus query language toolkit"};
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a query and print its class and AST");
  parse_cmd->add_option("query", pa.query, "CQL query")->required();
  parse_cmd->add_flag("--json", pa.json, "Machine-readable output");

  ExecArgs ea;
  auto* exec_cmd = app.add_subcommand("exec", "Run a query over a vertical corpus file");
  exec_cmd->add_option("query", ea.query, "CQL query")->required();
  exec_cmd->add_option("corpus", ea.corpus, "Vertical corpus file")->required();
  exec_cmd->add_option("--limit", ea.limit, "Maximum number of hits (default $CQLKIT_LIMIT or 100000)");
  exec_cmd->add_flag("--json", ea.json, "Machine-readable output");

  EvalArgs va;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against a gold dataset");
  eval_cmd->add_option("--gold", va.gold, "Gold dataset JSONL")->required();
  eval_cmd->add_option("--pred", va.pred, "Predictions JSONL")->required();
  eval_cmd->add_option("--corpus", va.corpus, "Vertical corpus for execution accuracy");
  eval_cmd->add_option("--alpha", va.alpha, "BLEU weight")->capture_default_str();
  eval_cmd->add_option("--beta", va.beta, "Tree-similarity weight")->capture_default_str();
  eval_cmd->add_option("--limit", va.limit, "Hit limit per query");
  eval_cmd->add_option("--jobs", va.jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--json", va.json, "Machine-readable report");

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic query dataset");
  gen_cmd->add_option("--corpus", ga.corpus, "Vertical corpus file")->required();
  gen_cmd->add_option("--collocations", ga.collocations, "Collocation file (default: naive extraction)");
  gen_cmd->add_option("--synonyms", ga.synonyms, "Synonym lexicon file");
  gen_cmd->add_option("--n", ga.n, "Number of records")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--mix", ga.mix, "Class proportions")->capture_default_str();
  gen_cmd->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  gen_cmd->add_flag("--require-hits", ga.require_hits, "Keep only queries with at least one hit");
  gen_cmd->add_option("--out", ga.out, "Output JSONL (default stdout)");
  gen_cmd->add_option("--lang", ga.lang, "Language tag for records")->capture_default_str();
  gen_cmd->add_option("--window", ga.window, "Naive collocation window")->capture_default_str()->check(CLI::Range(1, 5));
  gen_cmd->add_option("--top", ga.top, "Use only the N most frequent naive collocations");
  gen_cmd->add_option("--null-prob", ga.null_prob, "Null-token insertion probability")->capture_default_str();
  gen_cmd->add_option("--nested-prob", ga.nested_prob, "Probability of the two-within form")->capture_default_str();
  gen_cmd->add_option("--min-freq", ga.min_freq, "Minimum word frequency")->capture_default_str();
  gen_cmd->add_flag("--json", ga.json, "Machine-readable summary");

  StatsArgs sa;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics per query class");
  stats_cmd->add_option("dataset", sa.dataset, "Dataset JSONL")->required();
  stats_cmd->add_flag("--json", sa.json, "Machine-readable output");

  CollocationArgs ca;
  auto* col_cmd = app.add_subcommand("collocations", "Extract frequent word pairs from a corpus");
  col_cmd->add_option("corpus", ca.corpus, "Vertical corpus file")->required();
  col_cmd->add_option("--window", ca.window, "Maximum token distance")->capture_default_str()->check(CLI::Range(1, 5));
  col_cmd->add_option("--top", ca.top, "Keep the N most frequent");
  col_cmd->add_flag("--json", ca.json, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  if (parse_cmd->parsed()) return cmd_parse(pa, out, err);
  if (exec_cmd->parsed()) return cmd_exec(ea, out, err);
  if (eval_cmd->parsed()) return cmd_eval(va, out, err);
  if (gen_cmd->parsed()) return cmd_gen(ga, out, err);
  if (stats_cmd->parsed()) return cmd_stats(sa, out, err);
  if (col_cmd->parsed()) return cmd_collocations(ca, out, err);
  return kUsage;
}

}  // namespace cqlkit::cli
