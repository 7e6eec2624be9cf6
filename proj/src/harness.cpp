#include "cqlkit/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "cqlkit/parser.hpp"
#include "cqlkit/signature.hpp"
#include "utf8.hpp"

namespace cqlkit {

using nlohmann::json;

namespace {

json parse_line(const std::string& line, std::size_t lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError(lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(lineno, "expected a JSON object");
  return j;
}

std::string string_field(const json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw SchemaError(lineno, std::string("missing string field \"") + key + "\"");
  return it->get<std::string>();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(0, "cannot open '" + path + "'");
  return in;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, lineno);
  }
}

}  // namespace

std::vector<DatasetRecord> read_dataset(std::istream& in, bool validate_cql) {
  std::vector<DatasetRecord> out;
  std::set<std::string> seen;
  for_each_line(in, [&](const std::string& line, std::size_t lineno) {
    json j = parse_line(line, lineno);
    DatasetRecord r;
    r.id = string_field(j, "id", lineno);
    r.nl = string_field(j, "nl", lineno);
    r.cql = string_field(j, "cql", lineno);
    r.lang = string_field(j, "lang", lineno);
    auto cls_text = string_field(j, "class", lineno);
    auto cls = query_class_from_string(cls_text);
    if (!cls) throw SchemaError(lineno, "record '" + r.id + "': unknown class \"" + cls_text + "\"");
    r.cls = *cls;
    if (!seen.insert(r.id).second) throw DuplicateId(lineno, "duplicate id '" + r.id + "'");
    if (validate_cql) {
      try {
        Query q = parse(r.cql);
        if (classify(q) != r.cls) {
          throw SchemaError(lineno, "record '" + r.id + "': cql is a " + to_string(classify(q)) +
                                        " query but class is \"" + cls_text + "\"");
        }
      } catch (const ParseError& e) {
        throw SchemaError(lineno, "record '" + r.id + "': cql does not parse: " + e.what());
      }
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::string& path, bool validate_cql) {
  auto in = open_input(path);
  return read_dataset(in, validate_cql);
}

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::vector<DatasetRecord>& gold) {
  std::set<std::string> gold_ids;
  for (const auto& g : gold) gold_ids.insert(g.id);
  std::vector<PredictionRecord> out;
  std::set<std::string> seen;
  for_each_line(in, [&](const std::string& line, std::size_t lineno) {
    json j = parse_line(line, lineno);
    PredictionRecord p{string_field(j, "id", lineno), string_field(j, "pred", lineno)};
    if (!seen.insert(p.id).second) throw DuplicateId(lineno, "duplicate prediction id '" + p.id + "'");
    if (!gold_ids.count(p.id)) throw DanglingPredictionId(lineno, "prediction id '" + p.id + "' is not in the gold set");
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::string& path, const std::vector<DatasetRecord>& gold) {
  auto in = open_input(path);
  return read_predictions(in, gold);
}

json to_json(const DatasetRecord& r) {
  json j;
  j["id"] = r.id;
  j["nl"] = r.nl;
  j["cql"] = r.cql;
  j["class"] = to_string(r.cls);
  j["lang"] = r.lang;
  return j;
}

void write_dataset(const std::vector<DatasetRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

json to_json(const Provenance& p) {
  json j;
  j["form"] = p.form;
  j["sources"] = json::array();
  for (const auto& c : p.sources) j["sources"].push_back(to_string(c));
  j["mutations"] = json::array();
  for (auto m : p.mutations) j["mutations"].push_back(to_string(m));
  j["null_tokens"] = p.null_tokens;
  if (p.structure) j["structure"] = *p.structure;
  if (p.pair) {
    j["pair"] = {{"doc", p.pair->doc}, {"first", p.pair->first}, {"second", p.pair->second}, {"attr", p.pair->attr}};
  }
  return j;
}

void write_generated(const std::vector<GenRecord>& records, const std::string& lang, std::ostream& out) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "q%06zu", i + 1);
    json j = to_json(DatasetRecord{id, "", records[i].cql, records[i].cls, lang});
    j["provenance"] = to_json(records[i].provenance);
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void accumulate(MetricRow& row, const MetricScore& s) {
  ++row.count;
  row.em += s.em;
  row.va += s.va;
  row.ex += s.ex.value_or(0);
  row.bleu += s.bleu;
  row.ts += s.ts;
  row.cqlbleu += s.cqlbleu;
}

void finalize(MetricRow& row) {
  if (row.count == 0) return;
  double n = static_cast<double>(row.count);
  for (double* v : {&row.em, &row.va, &row.ex, &row.bleu, &row.ts, &row.cqlbleu}) *v /= n;
}

json row_json(const MetricRow& row, bool has_ex) {
  json j;
  j["count"] = row.count;
  if (row.count == 0) {
    for (const char* k : {"em", "va", "bleu", "ts", "cqlbleu"}) j[k] = nullptr;
    if (has_ex) j["ex"] = nullptr;
    return j;
  }
  j["em"] = row.em;
  j["va"] = row.va;
  if (has_ex) j["ex"] = row.ex;
  j["bleu"] = row.bleu;
  j["ts"] = row.ts;
  j["cqlbleu"] = row.cqlbleu;
  return j;
}

constexpr QueryClass kClasses[] = {QueryClass::Simple, QueryClass::Within, QueryClass::Condition};

}  // namespace

MetricReport evaluate(const std::vector<DatasetRecord>& gold, const std::vector<PredictionRecord>& preds,
                      const CorpusIndex* corpus, const EvalOptions& opts) {
  std::unordered_map<std::string, const std::string*> by_id;
  for (const auto& p : preds) by_id[p.id] = &p.pred;

  struct Slot {
    std::optional<MetricScore> score;
    std::string error;
  };
  std::vector<Slot> slots(gold.size());
  static const std::string kEmpty;

  auto score_one = [&](std::size_t i) {
    auto it = by_id.find(gold[i].id);
    const std::string& pred = it == by_id.end() ? kEmpty : *it->second;
    try {
      slots[i].score = score_record(pred, gold[i].cql, corpus, opts.weights, opts.limit);
    } catch (const GoldInvalid& e) {
      slots[i].error = e.what();
    } catch (const GoldExecutionFailed& e) {
      slots[i].error = e.what();
    }
  };

  std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, gold.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < gold.size(); ++i) score_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < gold.size(); i = next++) score_one(i);
      });
    }
    for (auto& t : workers) t.join();
  }

  MetricReport report;
  report.has_ex = corpus != nullptr;
  for (auto cls : kClasses) report.classes[cls];
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    if (!by_id.count(g.id)) ++report.missing_predictions;
    if (!slots[i].score) {
      ++report.excluded;
      report.warnings.push_back("record '" + g.id + "' excluded: " + slots[i].error);
      continue;
    }
    const auto& s = *slots[i].score;
    if (s.warning) report.warnings.push_back("record '" + g.id + "': " + *s.warning);
    accumulate(report.classes[g.cls], s);
    accumulate(report.overall, s);
    report.records.push_back(RecordResult{g.id, g.cls, s});
  }
  if (report.missing_predictions) {
    report.warnings.push_back(std::to_string(report.missing_predictions) +
                              " gold record(s) had no prediction and were scored as empty");
  }
  for (auto& [cls, row] : report.classes) finalize(row);
  finalize(report.overall);
  return report;
}

std::string format_percent(double fraction) {
  double scaled = std::floor(fraction * 10000.0 + 0.5 + 1e-7);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", scaled / 100.0);
  return buf;
}

std::string render_report(const MetricReport& r) {
  std::ostringstream out;
  char line[160];
  if (r.has_ex) {
    std::snprintf(line, sizeof line, "%-10s %7s %8s %8s %8s %8s\n", "class", "count", "EM", "VA", "EX", "CQLBLEU");
  } else {
    std::snprintf(line, sizeof line, "%-10s %7s %8s %8s %8s\n", "class", "count", "EM", "VA", "CQLBLEU");
  }
  out << line;
  auto row = [&](const char* name, const MetricRow& m) {
    auto cell = [&](double v) { return m.count ? format_percent(v) : std::string("-"); };
    if (r.has_ex) {
      std::snprintf(line, sizeof line, "%-10s %7zu %8s %8s %8s %8s\n", name, m.count, cell(m.em).c_str(),
                    cell(m.va).c_str(), cell(m.ex).c_str(), cell(m.cqlbleu).c_str());
    } else {
      std::snprintf(line, sizeof line, "%-10s %7zu %8s %8s %8s\n", name, m.count, cell(m.em).c_str(),
                    cell(m.va).c_str(), cell(m.cqlbleu).c_str());
    }
    out << line;
  };
  for (auto cls : kClasses) row(to_string(cls), r.classes.at(cls));
  row("overall", r.overall);
  if (r.excluded) out << "excluded: " << r.excluded << "\n";
  return out.str();
}

json to_json(const MetricReport& r) {
  json j;
  j["overall"] = row_json(r.overall, r.has_ex);
  j["classes"] = json::object();
  for (auto cls : kClasses) j["classes"][to_string(cls)] = row_json(r.classes.at(cls), r.has_ex);
  j["excluded"] = r.excluded;
  j["missing_predictions"] = r.missing_predictions;
  j["warnings"] = r.warnings;
  j["records"] = json::array();
  for (const auto& rec : r.records) {
    json x;
    x["id"] = rec.id;
    x["class"] = to_string(rec.cls);
    x["em"] = rec.score.em;
    x["va"] = rec.score.va;
    if (rec.score.ex) x["ex"] = *rec.score.ex;
    x["bleu"] = rec.score.bleu;
    x["ts"] = rec.score.ts;
    x["cqlbleu"] = rec.score.cqlbleu;
    j["records"].push_back(std::move(x));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

struct StatSums {
  std::size_t n = 0;
  double nl = 0, cql = 0, tokens = 0, depth = 0, nodes = 0, atoms = 0;

  void fill(ClassStats& out) const {
    if (n == 0) return;
    double d = static_cast<double>(n);
    out.nl_chars = nl / d;
    out.cql_chars = cql / d;
    out.token_exprs = tokens / d;
    out.ast_depth = depth / d;
    out.ast_nodes = nodes / d;
    out.atoms = atoms / d;
  }
};

}  // namespace

DatasetStats compute_stats(const std::vector<DatasetRecord>& gold) {
  DatasetStats stats;
  std::map<QueryClass, StatSums> sums;
  StatSums total;
  for (auto cls : kClasses) {
    stats.classes[cls];
    sums[cls];
  }
  for (const auto& r : gold) {
    auto& cs = stats.classes[r.cls];
    ++cs.count;
    ++stats.overall.count;
    auto q = try_parse(r.cql);
    if (!q) {
      ++cs.unparseable;
      ++stats.overall.unparseable;
      continue;
    }
    AstShape shape = ast_shape(*q);
    for (StatSums* s : {&sums[r.cls], &total}) {
      ++s->n;
      s->nl += static_cast<double>(utf8::code_point_count(r.nl));
      s->cql += static_cast<double>(utf8::code_point_count(r.cql));
      s->tokens += static_cast<double>(shape.token_expr_count);
      s->depth += static_cast<double>(shape.depth);
      s->nodes += static_cast<double>(shape.node_count);
      s->atoms += static_cast<double>(shape.atom_count);
    }
  }
  for (auto cls : kClasses) sums[cls].fill(stats.classes[cls]);
  total.fill(stats.overall);
  return stats;
}

std::string render_stats(const DatasetStats& s) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%-10s %7s %8s %8s %8s %8s %8s %8s %11s\n", "class", "count", "NL_len", "CQL_len",
                "tokens", "depth", "nodes", "atoms", "unparseable");
  out << line;
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  auto row = [&](const char* name, const ClassStats& c) {
    std::snprintf(line, sizeof line, "%-10s %7zu %8s %8s %8s %8s %8s %8s %11zu\n", name, c.count,
                  cell(c.nl_chars).c_str(), cell(c.cql_chars).c_str(), cell(c.token_exprs).c_str(),
                  cell(c.ast_depth).c_str(), cell(c.ast_nodes).c_str(), cell(c.atoms).c_str(), c.unparseable);
    out << line;
  };
  for (auto cls : kClasses) row(to_string(cls), s.classes.at(cls));
  row("overall", s.overall);
  return out.str();
}

json to_json(const DatasetStats& s) {
  auto one = [](const ClassStats& c) {
    json j;
    j["count"] = c.count;
    j["unparseable"] = c.unparseable;
    auto put = [&](const char* key, const std::optional<double>& v) { j[key] = v ? json(*v) : json(nullptr); };
    put("nl_chars", c.nl_chars);
    put("cql_chars", c.cql_chars);
    put("token_exprs", c.token_exprs);
    put("ast_depth", c.ast_depth);
    put("ast_nodes", c.ast_nodes);
    put("atoms", c.atoms);
    return j;
  };
  json j;
  j["overall"] = one(s.overall);
  j["classes"] = json::object();
  for (auto cls : kClasses) j["classes"][to_string(cls)] = one(s.classes.at(cls));
  return j;
}

}  // namespace cqlkit
