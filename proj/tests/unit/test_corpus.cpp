#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "dsf/corpus.hpp"
#include "dsf/error.hpp"
#include "dsf/utf8.hpp"
#include "support.hpp"

using namespace dsf;

namespace {

std::vector<std::string> texts(const std::vector<Sentence>& ss) {
  std::vector<std::string> out;
  for (const auto& s : ss) out.push_back(s.text);
  return out;
}

std::vector<std::string> token_texts(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.text);
  return out;
}

// Documents of the hand-segmented fixture with their expected sentences.
std::vector<std::vector<std::string>> segmentation_fixture() {
  std::ifstream in(test::data("segmentation.txt"));
  REQUIRE(in);
  std::vector<std::vector<std::string>> docs(1);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      if (!docs.back().empty()) docs.emplace_back();
      continue;
    }
    docs.back().push_back(line);
  }
  if (docs.back().empty()) docs.pop_back();
  return docs;
}

// Random text over a small alphabet that exercises every tokenizer branch.
std::string random_text(std::mt19937_64& rng, std::size_t pieces) {
  static const std::vector<std::string> alphabet = {
      "а",  "Б", "x", "Y", "7",  "0",   ".",  ",",  "!",       "?",   "…",  "«", "»",
      "\"", " ", " ", " ", "\t", "\n",  "-",  "—",  "http://", "www.", "@",  "_", "%",
      "(",  ")", "ё", "́",  "\x01", "\xFF", "г", "ул", "MASK", "NUM", "€"};
  std::string s;
  for (std::size_t i = 0; i < pieces; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("tokenize: reference examples") {
    auto t = tokenize("ФАС подозревает МТС");
    REQUIRE(t.size() == 3);
    CHECK(std::all_of(t.begin(), t.end(), [](const Token& x) { return x.kind == TokenKind::word; }));

    t = tokenize("«герой»");
    REQUIRE(t.size() == 3);
    CHECK(t[0].kind == TokenKind::quote);
    CHECK(t[1].kind == TokenKind::word);
    CHECK(t[2].kind == TokenKind::quote);

    t = tokenize("http://a.b/c упал");
    REQUIRE(t.size() == 2);
    CHECK(t[0].kind == TokenKind::url);
    CHECK(t[1].kind == TokenKind::word);
  }

  TEST_CASE("tokenize: hand-written fixture") {
    std::ifstream in(test::data("tokenize.tsv"));
    REQUIRE(in);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cols;
      std::stringstream ss(line);
      std::string col;
      while (std::getline(ss, col, '\t')) cols.push_back(col);
      std::vector<std::string> got;
      for (const auto& tok : tokenize(cols[0])) {
        got.push_back(std::string(to_string(tok.kind)) + ":" + tok.text);
      }
      CHECK_MESSAGE(got == std::vector<std::string>(cols.begin() + 1, cols.end()), cols[0]);
      ++rows;
    }
    CHECK(rows >= 20);
  }

  TEST_CASE("tokenize: offsets are increasing, non-overlapping and slice the text") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
      const auto text = random_text(rng, 40);
      std::size_t prev_end = 0;
      for (const auto& t : tokenize(text)) {
        CHECK(t.span.start >= prev_end);
        CHECK(t.span.end > t.span.start);
        CHECK(text.substr(t.span.start, t.span.size()) == t.text);
        prev_end = t.span.end;
      }
    }
  }

  TEST_CASE("tokenize: quote kind iff configured quote glyph") {
    TextConfig cfg;
    std::mt19937_64 rng(5);
    for (int k = 0; k < 300; ++k) {
      for (const auto& t : tokenize(random_text(rng, 30), cfg)) {
        CHECK((t.kind == TokenKind::quote) == cfg.is_quote(t.text));
      }
    }
  }

  TEST_CASE("tokenize: space-joined round trip") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
      const auto first = token_texts(tokenize(random_text(rng, 40)));
      std::string joined;
      for (const auto& t : first) joined += (joined.empty() ? "" : " ") + t;
      CHECK(token_texts(tokenize(joined)) == first);
    }
  }

  TEST_CASE("split_sentences: reference examples") {
    CHECK(texts(split_sentences({"d", "Привет. Как дела?", {}})) ==
          std::vector<std::string>{"Привет.", "Как дела?"});
    CHECK(split_sentences({"d", "Курс 10.5 руб. вырос.", {}}).size() == 1);
    CHECK(split_sentences({"d", "", {}}).empty());
    CHECK(split_sentences({"d", "   \n ", {}}).empty());
  }

  TEST_CASE("split_sentences: hand-segmented 50-sentence fixture") {
    const auto docs = segmentation_fixture();
    std::size_t total = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      std::string text;
      for (const auto& s : docs[d]) text += (text.empty() ? "" : " ") + s;
      const auto got = texts(split_sentences({"doc" + std::to_string(d), text, {}}));
      CHECK_MESSAGE(got == docs[d], text);
      total += docs[d].size();
    }
    CHECK(total == 50);
  }

  TEST_CASE("split_sentences: ids, spans and indices") {
    Document doc{"news-1", "Один. Два!  Три?", {}};
    const auto ss = split_sentences(doc);
    REQUIRE(ss.size() == 3);
    CHECK(ss[1].id == "news-1:1");
    CHECK(ss[1].doc_id == "news-1");
    CHECK(ss[1].index == 1);
    CHECK(doc.text.substr(ss[2].span.start, ss[2].span.size()) == "Три?");
    CHECK(ss[2].tokens.front().span.start == 0);
  }

  TEST_CASE("split_sentences: continuation rule can be switched off") {
    TextConfig cfg;
    cfg.lowercase_continues = false;
    CHECK(split_sentences({"d", "«Почему?» — спросил он.", {}}, cfg).size() == 2);
    CHECK(split_sentences({"d", "«Почему?» — спросил он.", {}}).size() == 1);
  }

  TEST_CASE("split_sentences: custom abbreviation list") {
    test::TempDir dir;
    test::write_file(dir / "abbr.txt", "# comment\nмин.\nУЛ\n");
    TextConfig cfg;
    cfg.abbreviations = load_abbreviations((dir / "abbr.txt").string());
    CHECK(cfg.abbreviations.count("мин"));
    CHECK(cfg.abbreviations.count("ул"));
    CHECK(split_sentences({"d", "Ждали 5 мин. Потом ушли.", {}}, cfg).size() == 1);
    CHECK(split_sentences({"d", "Ждали 5 мин. Потом ушли.", {}}).size() == 2);
    CHECK_THROWS_AS(load_abbreviations((dir / "missing.txt").string()), ConfigError);
  }

  TEST_CASE("split_sentences: totality on random documents") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 500; ++k) {
      Document doc{"r", random_text(rng, 60), {}};
      const auto ss = split_sentences(doc);
      std::vector<bool> covered(doc.text.size(), false);
      std::size_t prev_end = 0;
      for (const auto& s : ss) {
        CHECK(s.span.end > s.span.start);
        CHECK(s.span.start >= prev_end);
        prev_end = s.span.end;
        for (auto i = s.span.start; i < s.span.end; ++i) covered[i] = true;
        CHECK(doc.text.substr(s.span.start, s.span.size()) == s.text);
      }
      // Every byte of every token lies inside a sentence.
      for (const auto& t : tokenize(doc.text)) {
        for (auto i = t.span.start; i < t.span.end; ++i) CHECK(covered[i]);
      }
    }
  }

  TEST_CASE("normalize: reference examples") {
    CHECK(normalize("см. http://x.y") == "см. URL");
    CHECK(normalize("@ivan привет!!") == "USER привет!!");
    CHECK(normalize("цена 100 руб") == "цена NUM руб");
  }

  TEST_CASE("normalize: whitespace, controls and disallowed glyphs") {
    CHECK(normalize("  много \t\n пробелов  ") == "много пробелов");
    CHECK(normalize("контроль\x07ный") == "контрольный");
    CHECK(normalize("звёзды ★ и ♥ тут") == "звёзды и тут");
    CHECK(normalize("«цитата» и \"ещё\"") == "«цитата» и \"ещё\"");
    CHECK(normalize("курс 10.5%") == "курс NUM%");
    CHECK(normalize("MASK повысил") == "MASK повысил");
  }

  TEST_CASE("normalize: idempotent on random text") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 1000; ++k) {
      const auto once = normalize(random_text(rng, 50));
      CHECK(normalize(once) == once);
    }
  }

  TEST_CASE("normalize_with_tokens: tokens equal a fresh tokenize of the output") {
    std::mt19937_64 rng(29);
    const TextConfig plain;
    TextConfig bracketed;
    bracketed.url_token = "<URL>";
    bracketed.number_token = "12";
    for (const TextConfig* cfg : {&plain, static_cast<const TextConfig*>(&bracketed)}) {
      for (int k = 0; k < 3000; ++k) {
        auto raw = random_text(rng, 40);
        for (const char* glue : {"abc@ivan", "URL", "5,5", "USER@x", "x.ru/путь"}) {
          if (rng() % 4 == 0) raw += glue;
        }
        const auto raw_tokens = tokenize(raw, *cfg);
        for (const std::vector<Token>* given : {static_cast<const std::vector<Token>*>(nullptr), &raw_tokens}) {
          const auto n = normalize_with_tokens(raw, *cfg, given);
          CHECK(n.text == normalize(raw, *cfg));
          const auto fresh = tokenize(n.text, *cfg);
          REQUIRE(n.tokens.size() == fresh.size());
          for (std::size_t i = 0; i < fresh.size(); ++i) {
            CHECK(n.tokens[i].text == fresh[i].text);
            CHECK(n.tokens[i].span == fresh[i].span);
            CHECK(n.tokens[i].kind == fresh[i].kind);
          }
        }
      }
    }
    // Replacement glued to a word re-tokenizes as one word.
    const auto glued = normalize_with_tokens("abc@ivan");
    CHECK(glued.text == "abcUSER");
    REQUIRE(glued.tokens.size() == 1);
    CHECK(glued.tokens[0].kind == TokenKind::word);
  }

  TEST_CASE("fit_length_bounds: nearest-rank examples") {
    std::vector<std::size_t> lengths;
    for (std::size_t n = 2; n <= 101; ++n) lengths.push_back(n);
    auto b = fit_length_bounds(lengths, 0.05, 0.95);
    CHECK(b.min_tokens == 6);
    CHECK(b.max_tokens == 96);

    std::vector<std::size_t> same(20, 10);
    b = fit_length_bounds(same, 0.05, 0.95);
    CHECK(b.min_tokens == 10);
    CHECK(b.max_tokens == 10);

    b = fit_length_bounds(lengths, 0.0, 1.0);
    CHECK(b.min_tokens == 2);
    CHECK(b.max_tokens == 101);
  }

  TEST_CASE("fit_length_bounds: brute-force nearest rank") {
    // Oracle: the smallest value v with count(x <= v) >= q * n (q = 0 gives the minimum).
    std::mt19937_64 rng(29);
    for (int k = 0; k < 200; ++k) {
      std::vector<std::size_t> xs(1 + rng() % 60);
      for (auto& x : xs) x = 1 + rng() % 40;
      const double lo = (rng() % 50) / 100.0;
      const double hi = lo + (1 + rng() % static_cast<int>(100 - lo * 100)) / 100.0;
      auto oracle = [&](double q) {
        std::size_t best = *std::max_element(xs.begin(), xs.end());
        for (auto v : xs) {
          const auto count = std::count_if(xs.begin(), xs.end(), [&](auto x) { return x <= v; });
          if (static_cast<double>(count) >= q * xs.size() - 1e-9) best = std::min(best, v);
        }
        return best;
      };
      const auto b = fit_length_bounds(xs, lo, std::min(hi, 1.0));
      CHECK(b.min_tokens == oracle(lo));
      CHECK(b.max_tokens == oracle(std::min(hi, 1.0)));
    }
  }

  TEST_CASE("fit_length_bounds: widening quantiles never shrinks the range") {
    std::mt19937_64 rng(31);
    std::vector<std::size_t> xs(300);
    for (auto& x : xs) x = 1 + rng() % 80;
    for (int k = 0; k < 100; ++k) {
      const double lo = (rng() % 40) / 100.0, hi = 0.6 + (rng() % 40) / 100.0;
      const auto narrow = fit_length_bounds(xs, lo, hi);
      const auto wide = fit_length_bounds(xs, lo / 2, std::min(1.0, hi + 0.05));
      CHECK(wide.min_tokens <= narrow.min_tokens);
      CHECK(wide.max_tokens >= narrow.max_tokens);
    }
  }

  TEST_CASE("fit_length_bounds: errors") {
    CHECK_THROWS_WITH_AS(fit_length_bounds(std::vector<std::size_t>{}, 0.05, 0.95),
                         "no reference sample", DataError);
    CHECK_THROWS_AS(fit_length_bounds(std::vector<std::size_t>{1, 2}, 0.9, 0.1), ConfigError);
  }

  TEST_CASE("length_filter: examples and brute-force oracle") {
    LengthBounds b;
    b.min_tokens = 3;
    b.max_tokens = 10;
    CHECK(length_filter({test::sentence("один два три четыре пять")}, b).size() == 1);
    CHECK(length_filter({test::sentence("один два")}, b).empty());

    std::mt19937_64 rng(37);
    std::vector<Sentence> ss;
    for (int i = 0; i < 1000; ++i) {
      std::string text;
      const auto n = rng() % 15;
      for (std::size_t k = 0; k < n; ++k) text += "слово ";
      ss.push_back(test::sentence(text, "s" + std::to_string(i)));
    }
    std::vector<std::string> expected;
    for (const auto& s : ss) {
      if (s.tokens.size() >= 3 && s.tokens.size() <= 10) expected.push_back(s.id);
    }
    std::vector<std::string> got;
    for (const auto& s : length_filter(ss, b)) got.push_back(s.id);
    CHECK(got == expected);
  }

  TEST_CASE("CorpusReader: JSONL and plain text") {
    test::TempDir dir;
    test::write_file(dir / "c.jsonl",
                     "{\"id\":\"a\",\"text\":\"Раз. Два.\",\"source\":\"x\"}\n\n"
                     "{\"id\":\"b\",\"text\":\"Три.\"}\n");
    CorpusReader r((dir / "c.jsonl").string());
    Document d;
    REQUIRE(r.next(d));
    CHECK(d.id == "a");
    CHECK(d.source == std::optional<std::string>("x"));
    REQUIRE(r.next(d));
    CHECK(d.id == "b");
    CHECK_FALSE(d.source);
    CHECK_FALSE(r.next(d));

    test::write_file(dir / "c.txt", "первый документ\n\n   \nвторой\n");
    CorpusReader t((dir / "c.txt").string());
    REQUIRE(t.next(d));
    CHECK(d.id == "doc-1");
    REQUIRE(t.next(d));
    CHECK(d.id == "doc-4");
    CHECK(d.text == "второй");
    CHECK_FALSE(t.next(d));
  }

  TEST_CASE("CorpusReader: malformed input") {
    test::TempDir dir;
    test::write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"text\":\"ok\"}\nnot json\n");
    CorpusReader r((dir / "bad.jsonl").string());
    Document d;
    CHECK(r.next(d));
    CHECK_THROWS_AS(r.next(d), DataError);

    test::write_file(dir / "noid.jsonl", "{\"text\":\"ok\"}\n");
    CorpusReader r2((dir / "noid.jsonl").string());
    CHECK_THROWS_AS(r2.next(d), DataError);

    CHECK_THROWS_AS(CorpusReader((dir / "missing.jsonl").string()), ConfigError);
  }
}

TEST_CASE("shipped abbreviation list equals the built-in default" * doctest::test_suite("corpus")) {
  const auto path = test::data("../../data/abbreviations.txt");
  CHECK(dsf::load_abbreviations(path.string()) == dsf::TextConfig::default_abbreviations());
}
