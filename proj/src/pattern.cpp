#include "cqlkit/pattern.hpp"

#include "utf8.hpp"

namespace cqlkit {

ValuePattern::ValuePattern(std::string_view pattern) : source_(pattern) {
  if (pattern.empty()) throw RegexError("empty attribute value");
  try {
    re_ = std::wregex(utf8::decode(pattern), std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw RegexError("invalid regular expression \"" + source_ + "\": " + e.what());
  }
}

bool ValuePattern::full_match(std::string_view text) const {
  return std::regex_match(utf8::decode(text), re_);
}

const ValuePattern& PatternCache::get(const std::string& pattern) {
  auto it = compiled_.find(pattern);
  if (it == compiled_.end()) {
    it = compiled_.emplace(pattern, std::make_unique<ValuePattern>(pattern)).first;
  }
  return *it->second;
}

bool PatternCache::full_match(const std::string& pattern, const std::string& text) {
  auto& memo = outcomes_[pattern];
  auto it = memo.find(text);
  if (it != memo.end()) return it->second;
  bool result = get(pattern).full_match(text);
  memo.emplace(text, result);
  return result;
}

std::string regex_escape(std::string_view text) {
  static constexpr std::string_view kMeta = R"(\^$.|?*+()[]{})";
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (kMeta.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace cqlkit
