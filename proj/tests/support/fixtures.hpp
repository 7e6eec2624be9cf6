#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cqlkit/corpus.hpp"

namespace cqlkit::testing {

/// One sentence per inner vector, tokens as (word, pos); lemma = word.
using Sentence = std::vector<std::pair<std::string, std::string>>;

inline std::string vertical_text(const std::vector<std::vector<Sentence>>& docs) {
  std::ostringstream out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    out << "<doc id=\"d" << d << "\">\n";
    for (const auto& s : docs[d]) {
      out << "<s>\n";
      for (const auto& [w, p] : s) out << w << '\t' << p << '\t' << w << '\n';
      out << "</s>\n";
    }
    out << "</doc>\n";
  }
  return out.str();
}

inline AnnotatedCorpus make_corpus(const std::vector<std::vector<Sentence>>& docs) {
  std::istringstream in(vertical_text(docs));
  return ingest_vertical(in);
}

/// Random corpus over a small vocabulary. Word determines its pos, so
/// equal-word pairs are also equal-pos pairs.
inline AnnotatedCorpus random_corpus(std::uint64_t seed, std::size_t max_tokens, std::size_t vocab = 6) {
  static const std::vector<std::pair<std::string, std::string>> lexicon = {
      {"the", "DT"},  {"book", "NN"},  {"read", "VB"},   {"good", "JJ"},   {"a", "DT"},
      {"cat", "NN"},  {"runs", "VBZ"}, {"books", "NNS"}, {"slowly", "RB"}, {"big", "JJ"},
  };
  std::mt19937_64 rng(seed);
  std::size_t total = 1 + rng() % max_tokens;
  std::vector<std::vector<Sentence>> docs;
  std::size_t used = 0;
  while (used < total) {
    std::vector<Sentence> doc;
    std::size_t sentences = 1 + rng() % 3;
    for (std::size_t s = 0; s < sentences && used < total; ++s) {
      Sentence sent;
      std::size_t len = 1 + rng() % 8;
      for (std::size_t t = 0; t < len && used < total; ++t, ++used) {
        sent.push_back(lexicon[rng() % std::min(vocab, lexicon.size())]);
      }
      doc.push_back(std::move(sent));
    }
    docs.push_back(std::move(doc));
  }
  return make_corpus(docs);
}

/// Larger seeded corpus where every vocabulary word is frequent.
inline AnnotatedCorpus generation_corpus(std::uint64_t seed = 11, std::size_t sentences = 400) {
  static const std::vector<std::pair<std::string, std::string>> lexicon = {
      {"the", "DT"},     {"a", "DT"},       {"book", "NN"},   {"cat", "NN"},     {"house", "NN"},
      {"research", "NN"}, {"reads", "VBZ"}, {"writes", "VBZ"}, {"read", "VB"},   {"good", "JJ"},
      {"big", "JJ"},     {"slowly", "RB"},  {"often", "RB"},  {"books", "NNS"},  {"in", "IN"},
      {"evening", "NN"}, {"real", "JJ"},    {"rare", "JJ"},
  };
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Sentence>> docs;
  for (std::size_t d = 0; d < 4; ++d) {
    std::vector<Sentence> doc;
    for (std::size_t s = 0; s < sentences / 4; ++s) {
      Sentence sent;
      std::size_t len = 4 + rng() % 10;
      // "rare" is kept infrequent so the frequency guard has something to reject.
      for (std::size_t t = 0; t < len; ++t) sent.push_back(lexicon[rng() % (lexicon.size() - 1)]);
      doc.push_back(std::move(sent));
    }
    docs.push_back(std::move(doc));
  }
  for (int i = 0; i < 3; ++i) docs[0][i].push_back({"rare", "JJ"});
  return make_corpus(docs);
}

/// Scratch file removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& content, const std::string& suffix = ".txt") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cqlkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + suffix);
    std::ofstream(path_, std::ios::binary) << content;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace cqlkit::testing
