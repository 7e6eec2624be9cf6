#pragma once

#include <memory>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace cqlkit {

class RegexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A compiled attribute value. Matching is anchored at both ends and
/// operates on code points, so `.` consumes one CJK character.
class ValuePattern {
 public:
  /// Throws RegexError if `pattern` is empty or does not compile.
  explicit ValuePattern(std::string_view pattern);

  bool full_match(std::string_view text) const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::wregex re_;
};

/// Memoizes compiled patterns and per-value outcomes. Not thread-safe;
/// give each execution its own cache.
class PatternCache {
 public:
  const ValuePattern& get(const std::string& pattern);
  bool full_match(const std::string& pattern, const std::string& text);

 private:
  std::unordered_map<std::string, std::unique_ptr<ValuePattern>> compiled_;
  std::unordered_map<std::string, std::unordered_map<std::string, bool>> outcomes_;
};

/// Escapes regex metacharacters so `text` matches only itself.
std::string regex_escape(std::string_view text);

}  // namespace cqlkit
