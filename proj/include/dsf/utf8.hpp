#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace dsf::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed, >= 1
};

// Decodes the code point starting at `pos`. Invalid sequences decode as a
// single byte of U+FFFD.
inline Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};

  std::size_t need;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    return {kReplacement, 1};
  }
  if (pos + need >= s.size()) return {kReplacement, 1};
  for (std::size_t i = 1; i <= need; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kReplacement, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms and surrogates.
  if ((need == 1 && cp < 0x80) || (need == 2 && cp < 0x800) ||
      (need == 3 && (cp < 0x10000 || cp > 0x10FFFF)) ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {kReplacement, 1};
  }
  return {cp, need + 1};
}

void append(std::string& out, char32_t cp);

inline bool is_letter(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0370 && cp <= 0x03FF) return cp != 0x037E && cp != 0x0387;
  if (cp >= 0x0400 && cp <= 0x052F) return cp < 0x0482 || cp > 0x0489;
  // Combining marks (stress accents) stay inside the word they decorate.
  return cp >= 0x0300 && cp <= 0x036F;
}

inline bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }
bool is_space(char32_t cp);
bool is_control(char32_t cp);
bool is_upper(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

// Number of code points.
std::size_t length(std::string_view s);

}  // namespace dsf::utf8
