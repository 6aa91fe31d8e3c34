#include <doctest.h>

#include "dsf/utf8.hpp"

using namespace dsf;

TEST_SUITE("utf8") {
  TEST_CASE("decode handles ASCII, Cyrillic and four-byte sequences") {
    CHECK(utf8::decode("a", 0).cp == U'a');
    const std::string ya = "я";
    CHECK(utf8::decode(ya, 0).cp == U'я');
    CHECK(utf8::decode(ya, 0).length == 2);
    const std::string emoji = "\xF0\x9F\x98\x80";
    CHECK(utf8::decode(emoji, 0).cp == 0x1F600);
    CHECK(utf8::decode(emoji, 0).length == 4);
  }

  TEST_CASE("invalid bytes decode to a one-byte replacement") {
    CHECK(utf8::decode("\xFF", 0).cp == utf8::kReplacement);
    CHECK(utf8::decode("\xD0", 0).length == 1);          // truncated
    CHECK(utf8::decode("\xC0\x80", 0).cp == utf8::kReplacement);  // overlong
    CHECK(utf8::decode("\xED\xA0\x80", 0).cp == utf8::kReplacement);  // surrogate
  }

  TEST_CASE("append round-trips code points") {
    for (char32_t cp : {U'a', U'ж', U'€', char32_t(0x1F600)}) {
      std::string s;
      utf8::append(s, cp);
      CHECK(utf8::decode(s, 0).cp == cp);
      CHECK(utf8::decode(s, 0).length == s.size());
    }
  }

  TEST_CASE("to_lower folds Latin and Cyrillic including Ё") {
    CHECK(utf8::to_lower("ПРИВЕТ Мир ЁЖ") == "привет мир ёж");
    CHECK(utf8::to_lower("ABC xyz") == "abc xyz");
    CHECK(utf8::to_lower("ÄÖÜ") == "äöü");
    CHECK(utf8::to_lower("ЄІЇ") == "єії");
  }

  TEST_CASE("to_lower keeps undecodable bytes") {
    const std::string bad = "A\xFF" "B";
    CHECK(utf8::to_lower(bad) == "a\xFF" "b");
  }

  TEST_CASE("fast and general to_lower paths agree on every two-byte Cyrillic code point") {
    for (char32_t cp = 0x0400; cp <= 0x04FF; ++cp) {
      std::string s;
      utf8::append(s, cp);
      std::string expected;
      utf8::append(expected, utf8::to_lower(cp));
      CHECK(utf8::to_lower(s) == expected);
    }
  }

  TEST_CASE("classification") {
    CHECK(utf8::is_letter(U'ё'));
    CHECK(utf8::is_letter(0x0301));  // combining acute
    CHECK_FALSE(utf8::is_letter(U'5'));
    CHECK(utf8::is_digit(U'7'));
    CHECK(utf8::is_space(0x00A0));
    CHECK(utf8::is_control(0x0007));
    CHECK(utf8::is_upper(U'Ж'));
    CHECK_FALSE(utf8::is_upper(U'ж'));
    CHECK(utf8::length("ёж") == 2);
  }
}
