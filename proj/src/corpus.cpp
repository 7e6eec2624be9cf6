#include "cqlkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

namespace cqlkit {

const std::string& AnnToken::get(std::string_view attr) const {
  if (attr == "word") return word;
  if (attr == "pos") return pos;
  if (attr == "lemma") return lemma;
  throw std::out_of_range("unknown token attribute '" + std::string(attr) + "'");
}

std::size_t AnnotatedCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.tokens.size();
  return n;
}

FormatError::FormatError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct OpenTag {
  std::string name;
  std::uint32_t start;
  std::size_t line;
};

std::string attribute_value(std::string_view tag, std::string_view key) {
  std::string needle = std::string(key) + "=\"";
  auto at = tag.find(needle);
  if (at == std::string_view::npos) return {};
  at += needle.size();
  auto close = tag.find('"', at);
  if (close == std::string_view::npos) return {};
  return std::string(tag.substr(at, close - at));
}

bool is_structure_line(std::string_view line) {
  return line.size() >= 3 && line.front() == '<' && line.back() == '>' &&
         line.find('\t') == std::string_view::npos;
}

}  // namespace

AnnotatedCorpus ingest_vertical(std::istream& in) {
  AnnotatedCorpus corpus;
  std::vector<OpenTag> open;
  std::string line;
  std::size_t lineno = 0;
  bool in_doc = false;

  auto is_open = [&](std::string_view name) {
    return std::any_of(open.begin(), open.end(), [&](const OpenTag& t) { return t.name == name; });
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (is_open("s")) throw FormatError(lineno, "blank line inside sentence");
      continue;
    }
    if (line.front() == '#') continue;

    if (is_structure_line(line)) {
      std::string_view body(line);
      body = body.substr(1, body.size() - 2);
      if (!body.empty() && body.front() == '/') {
        std::string name(body.substr(1));
        if (open.empty() || open.back().name != name) {
          throw FormatError(lineno, "closing </" + name + "> without matching opening tag");
        }
        OpenTag tag = open.back();
        open.pop_back();
        auto doc_id = static_cast<std::uint32_t>(corpus.docs.size() - 1);
        auto end = static_cast<std::uint32_t>(corpus.docs.back().tokens.size());
        if (end == tag.start) {
          throw FormatError(lineno, name == "s" ? "empty sentence" : "empty <" + name + "> structure");
        }
        corpus.structures.push_back(StructureSpan{name, doc_id, tag.start, end});
        if (name == "doc") in_doc = false;
        continue;
      }
      if (!body.empty() && body.back() == '/') {
        throw FormatError(lineno, "self-closing structure tags are not allowed in corpus files");
      }
      auto name_end = body.find_first_of(" \t");
      std::string name(body.substr(0, name_end));
      if (name.empty()) throw FormatError(lineno, "structure tag without a name");
      if (is_open(name)) throw FormatError(lineno, "nested <" + name + "> inside an open <" + name + ">");
      if (name == "doc") {
        Document d;
        d.id = attribute_value(body, "id");
        if (d.id.empty()) d.id = std::to_string(corpus.docs.size());
        corpus.docs.push_back(std::move(d));
        in_doc = true;
      } else if (!in_doc) {
        throw FormatError(lineno, "<" + name + "> outside of <doc>");
      }
      open.push_back(OpenTag{name, static_cast<std::uint32_t>(corpus.docs.back().tokens.size()), lineno});
      continue;
    }

    std::vector<std::string> cols;
    std::size_t from = 0;
    while (true) {
      auto tab = line.find('\t', from);
      cols.push_back(line.substr(from, tab == std::string::npos ? std::string::npos : tab - from));
      if (tab == std::string::npos) break;
      from = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 3) {
      throw FormatError(lineno, "expected 2 or 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    if (cols[0].empty() || cols[1].empty()) throw FormatError(lineno, "empty word or pos column");
    if (!in_doc || !is_open("s")) throw FormatError(lineno, "token outside of <doc> and <s>");
    AnnToken tok{cols[0], cols[1], cols.size() == 3 && !cols[2].empty() ? cols[2] : cols[0]};
    corpus.docs.back().tokens.push_back(std::move(tok));
  }
  if (!open.empty()) {
    throw FormatError(open.back().line, "unclosed <" + open.back().name + ">");
  }
  std::stable_sort(corpus.structures.begin(), corpus.structures.end(),
                   [](const StructureSpan& a, const StructureSpan& b) {
                     return std::tie(a.doc_id, a.start, a.end) < std::tie(b.doc_id, b.start, b.end);
                   });
  return corpus;
}

AnnotatedCorpus ingest_vertical_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(0, "cannot open corpus file '" + path + "'");
  return ingest_vertical(in);
}

void write_vertical(const AnnotatedCorpus& c, std::ostream& out) {
  for (std::size_t d = 0; d < c.docs.size(); ++d) {
    const auto& doc = c.docs[d];
    // Opening and closing tags per token boundary, outermost first.
    std::vector<const StructureSpan*> spans;
    for (const auto& s : c.structures) {
      if (s.doc_id == d && s.name != "doc") spans.push_back(&s);
    }
    out << "<doc id=\"" << doc.id << "\">\n";
    auto opens = spans;
    std::stable_sort(opens.begin(), opens.end(), [](auto* a, auto* b) { return a->end > b->end; });
    auto closes = spans;
    std::stable_sort(closes.begin(), closes.end(), [](auto* a, auto* b) { return a->start > b->start; });
    for (std::uint32_t i = 0; i <= doc.tokens.size(); ++i) {
      for (const auto* s : closes) {
        if (s->end == i) out << "</" << s->name << ">\n";
      }
      if (i == doc.tokens.size()) break;
      for (const auto* s : opens) {
        if (s->start == i) out << "<" << s->name << ">\n";
      }
      const auto& t = doc.tokens[i];
      out << t.word << '\t' << t.pos << '\t' << t.lemma << '\n';
    }
    out << "</doc>\n";
  }
}

CorpusIndex::CorpusIndex(AnnotatedCorpus corpus) : corpus_(std::move(corpus)) {
  static const char* kAttrs[] = {"word", "pos", "lemma"};
  for (const char* a : kAttrs) postings_[a];
  std::uint32_t offset = 0;
  for (const auto& doc : corpus_.docs) {
    doc_offsets_.push_back(offset);
    for (const auto& tok : doc.tokens) {
      postings_["word"][tok.word].push_back(offset);
      postings_["pos"][tok.pos].push_back(offset);
      postings_["lemma"][tok.lemma].push_back(offset);
      ++freq_[tok.word];
      ++offset;
    }
  }
  total_ = offset;
  for (const auto& s : corpus_.structures) {
    auto& per_doc = spans_[s.name];
    if (per_doc.size() < corpus_.docs.size()) per_doc.resize(corpus_.docs.size());
    per_doc[s.doc_id].emplace_back(s.start, s.end);
  }
  for (auto& [name, per_doc] : spans_) {
    for (auto& v : per_doc) std::sort(v.begin(), v.end());
  }
}

const CorpusIndex::Postings& CorpusIndex::postings(std::string_view attr) const {
  static const Postings kEmpty;
  auto it = postings_.find(attr);
  return it == postings_.end() ? kEmpty : it->second;
}

const std::vector<std::uint32_t>& CorpusIndex::postings(std::string_view attr, const std::string& value) const {
  static const std::vector<std::uint32_t> kEmpty;
  const auto& p = postings(attr);
  auto it = p.find(value);
  return it == p.end() ? kEmpty : it->second;
}

std::size_t CorpusIndex::freq(const std::string& word) const {
  auto it = freq_.find(word);
  return it == freq_.end() ? 0 : it->second;
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>>& CorpusIndex::spans(const std::string& name,
                                                                                 std::size_t doc) const {
  static const std::vector<std::pair<std::uint32_t, std::uint32_t>> kEmpty;
  auto it = spans_.find(name);
  if (it == spans_.end() || doc >= it->second.size()) return kEmpty;
  return it->second[doc];
}

bool CorpusIndex::has_attribute(std::string_view attr) const { return postings_.find(attr) != postings_.end(); }

CorpusIndex build_index(AnnotatedCorpus corpus) { return CorpusIndex(std::move(corpus)); }

}  // namespace cqlkit
