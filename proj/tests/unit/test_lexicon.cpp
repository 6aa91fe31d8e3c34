#include <doctest.h>

#include <sstream>

#include "dsf/error.hpp"
#include "dsf/lexicon.hpp"
#include "dsf/utf8.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dsf;

namespace {

Lexicon inline_lexicon(const std::string& tsv, MatchOptions opts = {}) {
  std::istringstream in(tsv);
  return parse_lexicon(in, "inline", std::move(opts));
}

std::string joined_keys(const Sentence& s, TokenRange r, const MatchOptions& opts) {
  std::string out;
  for (auto i = r.first; i <= r.last; ++i) {
    if (i > r.first) out += ' ';
    out += opts.key(s.tokens[i].text);
  }
  return out;
}

}  // namespace

TEST_SUITE("lexicon") {
  TEST_CASE("20-row fixture: entries, ambiguity and categories") {
    const auto lex = load_lexicon(test::data("lexicon20.tsv").string());
    CHECK(lex.entries().size() == 20);
    std::set<std::string> ambiguous;
    for (const auto& e : lex.entries()) {
      if (e.ambiguous) ambiguous.insert(e.term);
    }
    CHECK(ambiguous == std::set<std::string>{"бандит", "лидер", "простой"});

    const auto vor = lex.by_first_token("вор");
    REQUIRE(vor.size() == 1);
    CHECK(vor[0]->categories == (kPersonReference | kCompanyReference));
    CHECK(vor[0]->source == std::optional<std::string>("hand"));
    const auto upal = lex.by_first_token("упал");
    REQUIRE(upal.size() == 1);
    CHECK(upal[0]->categories == kGeneral);
    CHECK_FALSE(upal[0]->source);
    CHECK(lex.by_first_token("из").front()->term == "из рук вон плохо");
  }

  TEST_CASE("seed_references: exactly the hand-enumerated nouns") {
    const auto lex = load_lexicon(test::data("lexicon20.tsv").string());
    const auto seeds = seed_references(lex);
    CHECK(seeds.negative == std::set<std::string>{"вор", "лохотрон", "мошенник"});
    CHECK(seeds.positive == std::set<std::string>{"герой"});

    const auto oracle_lex = oracle::load_lexicon(test::data("lexicon20.tsv").string());
    CHECK(seeds.negative == oracle_lex.seed_negative);
    CHECK(seeds.positive == oracle_lex.seed_positive);
  }

  TEST_CASE("seed_references: an ambiguous positive noun is excluded") {
    const auto lex = inline_lexicon(
        "звезда\tnoun\tpositive\tperson_reference\n"
        "звезда\tnoun\tnegative\tgeneral\n");
    CHECK(seed_references(lex).positive.empty());
    CHECK(seed_references(lex).negative.empty());
  }

  TEST_CASE("seed_references: no ambiguous term and only nouns") {
    const auto lex = load_lexicon(test::data("synth/lexicon.tsv").string());
    const auto seeds = seed_references(lex);
    for (const auto* set : {&seeds.positive, &seeds.negative}) {
      for (const auto& t : *set) {
        const auto entries = lex.by_first_token(t);
        REQUIRE_FALSE(entries.empty());
        for (const auto* e : entries) {
          if (e->term != t) continue;
          CHECK(e->pos == PartOfSpeech::noun);
          CHECK_FALSE(e->ambiguous);
        }
      }
    }
    CHECK(seeds.positive == std::set<std::string>{"герой", "лидер", "молодец", "умница"});
    CHECK(seeds.negative ==
          std::set<std::string>{"вор", "лохотрон", "мошенник", "негодяй"});
  }

  TEST_CASE("find_sentiment_words: basic examples") {
    const auto lex = load_lexicon(test::data("lexicon20.tsv").string());
    auto m = lex.find_sentiment_words(test::sentence("он настоящий герой"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].polarity == Label::positive);
    CHECK(m[0].tokens == TokenRange{2, 2});
    CHECK_FALSE(m[0].ambiguous);

    CHECK(lex.find_sentiment_words(test::sentence("сегодня идёт дождь")).empty());
    // Neutral-only terms are not sentiment words.
    CHECK(lex.find_sentiment_words(test::sentence("обычный день")).empty());

    m = lex.find_sentiment_words(test::sentence("Простой вопрос и Лидер рынка"));
    REQUIRE(m.size() == 2);
    CHECK(m[0].ambiguous);
    CHECK(m[1].ambiguous);
    CHECK(m[1].entry->term == "лидер");
  }

  TEST_CASE("find_sentiment_words: multiword terms and case") {
    const auto lex = load_lexicon(test::data("lexicon20.tsv").string());
    const auto m = lex.find_sentiment_words(
        test::sentence("Сервис, как всегда, НА ВЫСОТЕ, а связь из рук вон плохо."));
    REQUIRE(m.size() == 2);
    CHECK(m[0].tokens == TokenRange{5, 6});
    CHECK(m[0].polarity == Label::positive);
    CHECK(m[1].tokens == TokenRange{10, 13});
    CHECK(m[1].polarity == Label::negative);
  }

  TEST_CASE("overlap: longest match at the same start wins, then leftmost") {
    const auto lex = inline_lexicon(
        "банк\tnoun\tpositive\tgeneral\n"
        "банк россии\tphrase\tnegative\tgeneral\n"
        "россии рынок\tphrase\tpositive\tgeneral\n"
        "рынок\tnoun\tnegative\tgeneral\n");
    const auto m = lex.find_sentiment_words(test::sentence("банк россии рынок"));
    REQUIRE(m.size() == 2);
    CHECK(m[0].tokens == TokenRange{0, 1});
    CHECK(m[0].entry->term == "банк россии");
    CHECK(m[1].tokens == TokenRange{2, 2});

    const auto m2 = lex.find_sentiment_words(test::sentence("банк банк россии"));
    REQUIRE(m2.size() == 2);
    CHECK(m2[0].tokens == TokenRange{0, 0});
    CHECK(m2[1].tokens == TokenRange{1, 2});
  }

  TEST_CASE("find_sentiment_words equals the quadratic scan on 200 sentences") {
    const auto lex = load_lexicon(test::data("synth/lexicon.tsv").string());
    const auto oracle_lex = oracle::load_lexicon(test::data("synth/lexicon.tsv").string());
    const auto terms = oracle_lex.sentiment_terms();
    const auto sentences = test::synth_sentences(200, 77);
    REQUIRE(sentences.size() == 200);
    std::size_t total = 0;
    for (const auto& s : sentences) {
      std::vector<std::string> keys;
      for (const auto& t : s.tokens) keys.push_back(utf8::to_lower(t.text));
      const auto expected = oracle::scan(keys, terms);
      const auto got = lex.find_sentiment_words(s);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].tokens == TokenRange{expected[i].first, expected[i].last});
        CHECK(got[i].entry->term == expected[i].phrase);
        CHECK(got[i].ambiguous == oracle_lex.ambiguous(expected[i].phrase));
      }
      total += got.size();
    }
    CHECK(total > 200);
  }

  TEST_CASE("matches are sound, ordered and non-overlapping") {
    for (bool strip : {false, true}) {
      MatchOptions opts;
      opts.strip_suffixes = strip;
      const auto lex = load_lexicon(test::data("synth/lexicon.tsv").string(), opts);
      for (const auto& s : test::synth_sentences(300, 5)) {
        std::size_t next_free = 0;
        for (const auto& m : lex.find_sentiment_words(s)) {
          CHECK(m.tokens.first >= next_free);
          next_free = m.tokens.last + 1;
          std::string term_keys;
          for (const auto& k : phrase_keys(m.entry->term, opts)) {
            term_keys += (term_keys.empty() ? "" : " ") + k;
          }
          CHECK(joined_keys(s, m.tokens, opts) == term_keys);
        }
      }
    }
  }

  TEST_CASE("suffix stripping matches inflected forms") {
    MatchOptions opts;
    opts.strip_suffixes = true;
    CHECK(opts.key("Мошенниками") == "мошенник");
    CHECK(opts.key("мошенник") == "мошенник");
    CHECK(opts.key("герой") == "гер");
    CHECK(opts.key("вор") == "вор");  // stem would be too short
    const auto lex = load_lexicon(test::data("lexicon20.tsv").string(), opts);
    CHECK(lex.find_sentiment_words(test::sentence("они стали мошенниками")).size() == 1);
    CHECK(lex.find_sentiment_words(test::sentence("плохого качества")).size() == 1);

    const auto exact = load_lexicon(test::data("lexicon20.tsv").string());
    CHECK(exact.find_sentiment_words(test::sentence("они стали мошенниками")).empty());
  }

  TEST_CASE("SeedMatcher finds seeds with polarity") {
    SeedMatcher m(SeedList{{"герой"}, {"вор", "из рук вон"}});
    const auto hits = m.find(test::sentence("Вор и герой, из рук вон"));
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].polarity == Label::negative);
    CHECK(hits[1].term == "герой");
    CHECK(hits[1].polarity == Label::positive);
    CHECK(hits[2].tokens == TokenRange{4, 6});
    CHECK_THROWS_AS(SeedMatcher(SeedList{{"вор"}, {"вор"}}), DataError);
  }

  TEST_CASE("seed word lists") {
    test::TempDir dir;
    test::write_file(dir / "pos.txt", "# positive\nГерой\n\n  молодец \n");
    test::write_file(dir / "neg.txt", "вор\n");
    const auto seeds = load_seed_list((dir / "pos.txt").string(), (dir / "neg.txt").string());
    CHECK(seeds.positive == std::set<std::string>{"герой", "молодец"});
    CHECK(seeds.negative == std::set<std::string>{"вор"});
    test::write_file(dir / "both.txt", "вор\n");
    CHECK_THROWS_AS(load_seed_list((dir / "both.txt").string(), (dir / "neg.txt").string()),
                    DataError);
    CHECK_THROWS_AS(load_seed_list((dir / "nope.txt").string(), (dir / "neg.txt").string()),
                    ConfigError);
  }

  TEST_CASE("malformed rows are reported with their line number") {
    CHECK_THROWS_WITH_AS(inline_lexicon("# c\nхороший\tadj\n"),
                         "inline:2: expected 4 or 5 tab-separated columns, got 2", DataError);
    CHECK_THROWS_WITH_AS(inline_lexicon("хороший\tadj\tpositive\tgeneral\nплохой\tadj\tbad\tgeneral\n"),
                         "inline:2: unknown polarity 'bad'", DataError);
    CHECK_THROWS_WITH_AS(inline_lexicon("\n\nх\tzzz\tpositive\tgeneral\n"),
                         "inline:3: unknown part of speech 'zzz'", DataError);
    CHECK_THROWS_WITH_AS(inline_lexicon("х\tadj\tpositive\tfoo\n"),
                         "inline:1: unknown category in 'foo'", DataError);
    CHECK_THROWS_WITH_AS(inline_lexicon(" \tadj\tpositive\tgeneral\n"),
                         "inline:1: empty term", DataError);
  }

  TEST_CASE("empty lexicon and missing file") {
    CHECK_THROWS_WITH_AS(inline_lexicon("# only comments\n\n"), "inline: empty lexicon",
                         DataError);
    CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.tsv"), ConfigError);
  }

  TEST_CASE("repeated rows merge categories") {
    const auto lex = inline_lexicon(
        "вор\tnoun\tnegative\tgeneral\n"
        "ВОР\tnoun\tnegative\tperson_reference\n");
    REQUIRE(lex.entries().size() == 1);
    CHECK(lex.entries()[0].categories == (kGeneral | kPersonReference));
    CHECK_FALSE(lex.entries()[0].ambiguous);
  }
}
