#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cqlkit {

struct AnnToken {
  std::string word;
  std::string pos;
  std::string lemma;

  /// Value of `attr` (word, pos or lemma); throws std::out_of_range otherwise.
  const std::string& get(std::string_view attr) const;
};

struct StructureSpan {
  std::string name;
  std::uint32_t doc_id = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;  // exclusive
};

struct Document {
  std::string id;
  std::vector<AnnToken> tokens;
};

struct AnnotatedCorpus {
  std::vector<Document> docs;
  std::vector<StructureSpan> structures;

  std::size_t token_count() const;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the vertical format: `<doc id="...">`, `<s>`, `</s>`, `</doc>`
/// (or any other `<name>` ... `</name>` pair) alone on a line, tokens as
/// `word<TAB>pos[<TAB>lemma]`, `#` comments. Every token must sit inside
/// a doc and an s; blank lines are only allowed between sentences.
AnnotatedCorpus ingest_vertical(std::istream& in);
AnnotatedCorpus ingest_vertical_file(const std::string& path);

/// Writes `c` back in the vertical format (doc, s and other spans).
void write_vertical(const AnnotatedCorpus& c, std::ostream& out);

/// Immutable lookup structure over a corpus. Positions in postings are
/// global: doc_offset(doc) + token offset.
class CorpusIndex {
 public:
  using Postings = std::unordered_map<std::string, std::vector<std::uint32_t>>;

  explicit CorpusIndex(AnnotatedCorpus corpus);

  const AnnotatedCorpus& corpus() const { return corpus_; }
  std::size_t token_count() const { return total_; }
  std::uint32_t doc_offset(std::size_t doc) const { return doc_offsets_[doc]; }

  /// Postings of one attribute: exact value -> ascending global positions.
  /// Empty for attributes the corpus does not carry.
  const Postings& postings(std::string_view attr) const;
  const std::vector<std::uint32_t>& postings(std::string_view attr, const std::string& value) const;

  std::size_t freq(const std::string& word) const;
  const std::unordered_map<std::string, std::size_t>& frequencies() const { return freq_; }

  /// Sorted, non-overlapping (start, end) spans of `name` inside `doc`.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& spans(const std::string& name,
                                                                      std::size_t doc) const;

  bool has_attribute(std::string_view attr) const;

 private:
  AnnotatedCorpus corpus_;
  std::size_t total_ = 0;
  std::vector<std::uint32_t> doc_offsets_;
  std::map<std::string, Postings, std::less<>> postings_;
  std::unordered_map<std::string, std::size_t> freq_;
  std::map<std::string, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> spans_;
};

CorpusIndex build_index(AnnotatedCorpus corpus);

}  // namespace cqlkit
