#include "dsf/utf8.hpp"

namespace dsf::utf8 {

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\v':
    case '\f':
    case 0x0085:
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

bool is_control(char32_t cp) {
  return cp < 0x20 || (cp >= 0x7F && cp < 0xA0);
}

bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;   // А-Я
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;   // Ѐ-Џ, including Ё
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 32;
  // Paired Latin Extended-A and Cyrillic supplement ranges: even = upper.
  if ((cp >= 0x0100 && cp <= 0x017F) || (cp >= 0x0460 && cp <= 0x0481) ||
      (cp >= 0x048A && cp <= 0x04BF) || (cp >= 0x04D0 && cp <= 0x052F)) {
    if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  return cp;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0 >= 'A' && b0 <= 'Z' ? b0 + 32 : b0));
      ++pos;
      continue;
    }
    // Two-byte Cyrillic lead bytes: the lower-case form stays two bytes.
    if ((b0 == 0xD0 || b0 == 0xD1) && pos + 1 < s.size() &&
        (static_cast<unsigned char>(s[pos + 1]) & 0xC0) == 0x80) {
      const char32_t cp = ((b0 & 0x1F) << 6) | (static_cast<unsigned char>(s[pos + 1]) & 0x3F);
      const char32_t lo = to_lower(cp);
      out.push_back(static_cast<char>(0xC0 | (lo >> 6)));
      out.push_back(static_cast<char>(0x80 | (lo & 0x3F)));
      pos += 2;
      continue;
    }
    const auto d = decode(s, pos);
    if (d.cp == kReplacement && d.length == 1 &&
        static_cast<unsigned char>(s[pos]) >= 0x80) {
      out.push_back(s[pos]);  // keep undecodable bytes verbatim
    } else {
      append(out, to_lower(d.cp));
    }
    pos += d.length;
  }
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) pos += decode(s, pos).length;
  return n;
}

}  // namespace dsf::utf8
