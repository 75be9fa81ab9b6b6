#pragma once

#include <string>

namespace docqa::detail {

inline void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

// First code point of `s`; malformed input decodes leniently.
inline char32_t decode_first_utf8(const std::string& s) {
  if (s.empty()) return U' ';
  const auto b0 = static_cast<unsigned char>(s[0]);
  auto cont = [&](std::size_t i) -> char32_t {
    return i < s.size() ? static_cast<unsigned char>(s[i]) & 0x3F : 0;
  };
  if (b0 < 0x80) return b0;
  if ((b0 >> 5) == 0x6) return ((b0 & 0x1F) << 6) | cont(1);
  if ((b0 >> 4) == 0xE) return ((b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2);
  return ((b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
}

}  // namespace docqa::detail
