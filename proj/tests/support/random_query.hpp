#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cqlkit::testing {

/// Random query text over the vocabulary of random_corpus(). Labels that
/// take part in conditions always bind exactly one token.
class RandomQuery {
 public:
  explicit RandomQuery(std::uint64_t seed) : rng_(seed) {}

  std::string simple() { return seq(1 + pick(3), false); }

  std::string within() {
    std::string q = seq(1 + pick(2), false);
    std::size_t clauses = 1 + pick(2);
    for (std::size_t i = 0; i < clauses; ++i) {
      q += " within ";
      q += coin() ? seq(1 + pick(3), false) : structure();
    }
    return q;
  }

  std::string condition() {
    labels_.clear();
    std::string q = seq(2 + pick(2), true);
    if (labels_.size() < 2) return within();
    if (coin()) q += " within " + structure();
    static const char* attrs[] = {"word", "pos", "lemma"};
    std::size_t n = 1 + pick(2);
    q += " ::";
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t a = pick(labels_.size());
      std::size_t b = (a + 1 + pick(labels_.size() - 1)) % labels_.size();
      if (i) q += " &";
      q += " " + labels_[a] + "." + attrs[pick(3)] + (pick(4) == 0 ? " != " : " = ") + labels_[b] + "." +
           attrs[pick(3)];
    }
    return q;
  }

  std::string any() {
    switch (pick(3)) {
      case 0: return simple();
      case 1: return within();
      default: return condition();
    }
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> labels_;

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return rng_() & 1; }

  std::string structure() {
    static const char* names[] = {"s", "doc", "p"};
    return std::string("<") + names[pick(3)] + "/>";
  }

  std::string atom() {
    static const std::vector<std::pair<const char*, std::vector<const char*>>> values = {
        {"word", {"the", "book", "read", "good", "a", "cat", "b.*", ".*e.*", "the|a"}},
        {"pos", {"DT", "NN", "VB", "JJ", "N.*", "VB.*", "NN|JJ", "N"}},
        {"lemma", {"book", "cat", "read"}},
    };
    const auto& [attr, vals] = values[pick(values.size())];
    return std::string(attr) + (pick(4) == 0 ? "!=" : "=") + "\"" + vals[pick(vals.size())] + "\"";
  }

  std::string constraint(int depth) {
    std::size_t choice = depth > 1 ? 0 : pick(5);
    switch (choice) {
      case 1: return constraint(depth + 1) + " & " + constraint(depth + 1);
      case 2: return "(" + constraint(depth + 1) + " | " + constraint(depth + 1) + ")";
      case 3: return "!" + constraint(depth + 1);
      default: return atom();
    }
  }

  std::string quantifier() {
    switch (pick(8)) {
      case 0: return "?";
      case 1: return "*";
      case 2: return "+";
      case 3: {
        std::size_t lo = pick(3);
        return "{" + std::to_string(lo) + "," + std::to_string(lo + pick(3)) + "}";
      }
      default: return "";
    }
  }

  std::string seq(std::size_t len, bool with_labels) {
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) out += ' ';
      bool labeled = with_labels && pick(3) != 0;
      if (labeled) {
        std::string label = std::string(1, static_cast<char>('A' + labels_.size()));
        labels_.push_back(label);
        out += label + ":";
      }
      out += "[" + (pick(4) == 0 ? std::string() : constraint(0)) + "]";
      if (!labeled) out += quantifier();
    }
    return out;
  }
};

}  // namespace cqlkit::testing
