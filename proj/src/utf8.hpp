#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cqlkit::utf8 {

/// Byte length of the code point starting at `pos` (1 for stray bytes).
inline std::size_t sequence_length(std::string_view s, std::size_t pos) {
  auto b = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if (b >= 0xF0 && b < 0xF8) len = 4;
  else if (b >= 0xE0) len = (b < 0xF0) ? 3 : 1;
  else if (b >= 0xC0) len = 2;
  if (pos + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[pos + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

/// Code points; invalid bytes decode to U+FFFD one byte at a time.
inline std::wstring decode(std::string_view s) {
  std::wstring out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = sequence_length(s, i);
    auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    if (len == 1) {
      cp = b0 < 0x80 ? b0 : 0xFFFD;
    } else {
      cp = b0 & (0xFF >> (len + 1));
      for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out.push_back(static_cast<wchar_t>(cp));
    i += len;
  }
  return out;
}

inline std::size_t code_point_count(std::string_view s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); i += sequence_length(s, i)) ++count;
  return count;
}

}  // namespace cqlkit::utf8
