#include <doctest.h>

#include <sstream>

#include "dsf/annotator.hpp"
#include "dsf/error.hpp"
#include "dsf/utf8.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dsf;

namespace {

struct Resources {
  Lexicon lexicon;
  SeedMatcher seeds;
  Gazetteer gazetteer{"banks"};
  AnnotationRules rules;

  explicit Resources(const std::string& extra_rows = "")
      : lexicon(parse(extra_rows)), seeds(seed_references(lexicon)) {
    gazetteer.add("сбербанк", {EntityType::organization, std::nullopt});
    gazetteer.add("альфа банк", {EntityType::organization, std::nullopt});
    gazetteer.add("мтс", {EntityType::organization, std::nullopt});
    gazetteer.add("иван петров", {EntityType::person, std::nullopt});
  }

  static Lexicon parse(const std::string& extra) {
    std::istringstream in(
        "герой\tnoun\tpositive\tperson_reference\n"
        "мошенник\tnoun\tnegative\tperson_reference\n"
        "прибыль\tnoun\tpositive\tgeneral\n"
        "хороший\tadj\tpositive\tgeneral\n"
        "навязывании\tnoun\tnegative\tgeneral\n"
        "плохой\tadj\tnegative\tgeneral\n"
        "простой\tadj\tpositive\tgeneral\n"
        "простой\tadj\tnegative\tgeneral\n"
        "обычный\tadj\tneutral\tgeneral\n" +
        extra);
    return parse_lexicon(in, "test");
  }

  std::vector<LabeledExample> annotate(const std::string& text) const {
    const auto s = test::sentence(text, "s");
    return annotate_sentence(s, gazetteer.match(s), lexicon, seeds, rules);
  }
};

std::size_t mask_tokens(const std::string& text) {
  std::size_t n = 0;
  for (const auto& t : tokenize(text)) n += t.text == "MASK";
  return n;
}

}  // namespace

TEST_SUITE("annotator") {
  TEST_CASE("general part: one seed") {
    Resources r;
    const auto ex = r.annotate("он настоящий герой");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == Label::positive);
    CHECK(ex[0].part == Part::general);
    CHECK(ex[0].text == "он настоящий MASK");
    CHECK(ex[0].topic == "persons");
    CHECK(ex[0].target_surface == "герой");
    CHECK(ex[0].trigger == std::optional<std::string>("герой"));
    CHECK(ex[0].id == "s/g/2-2/positive");
    CHECK(ex[0].source_sentence_id == "s");
  }

  TEST_CASE("general part: seeds of both polarities duplicate the sentence") {
    Resources r;
    const auto ex = r.annotate("Герой поймал мошенник");
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].label == Label::positive);
    CHECK(ex[0].text == "MASK поймал мошенник");
    CHECK(ex[1].label == Label::negative);
    CHECK(ex[1].text == "Герой поймал MASK");
  }

  TEST_CASE("thematic: net profit example is positive") {
    Resources r;
    const auto ex = r.annotate("Сбербанк увеличил чистую прибыль в ноябре на 10,7%");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == Label::positive);
    CHECK(ex[0].part == Part::thematic);
    CHECK(ex[0].topic == "banks");
    CHECK(ex[0].text == "MASK увеличил чистую прибыль в ноябре на 10,7%");
    CHECK(ex[0].trigger == std::optional<std::string>("прибыль"));
  }

  TEST_CASE("thematic: imposing paid services is negative") {
    Resources r;
    const auto ex = r.annotate("ФАС подозревает МТС в навязывании платных услуг");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == Label::negative);
    CHECK(ex[0].text == "ФАС подозревает MASK в навязывании платных услуг");
  }

  TEST_CASE("thematic: distance bound") {
    Resources r;
    CHECK(r.annotate("Сбербанк раз два три четыре пять хороший").empty());
    const auto ex = r.annotate("Сбербанк раз два три четыре хороший");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == Label::positive);
    // Punctuation does not count towards the distance.
    CHECK(r.annotate("хороший , , , раз два три четыре — Сбербанк").size() == 1);

    r.rules.max_distance_words = 5;
    CHECK(r.annotate("Сбербанк раз два три четыре пять хороший").size() == 1);
  }

  TEST_CASE("thematic: same polarity gives one example with the first trigger") {
    Resources r;
    const auto ex = r.annotate("хороший Сбербанк и прибыль");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].trigger == std::optional<std::string>("хороший"));
  }

  TEST_CASE("thematic: conflicting polarities duplicate the sentence") {
    Resources r;
    const auto ex = r.annotate("плохой Сбербанк и прибыль");
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].label == Label::negative);  // trigger at token 0 comes first
    CHECK(ex[1].label == Label::positive);
    CHECK(ex[0].text == ex[1].text);
    CHECK(ex[0].id != ex[1].id);
  }

  TEST_CASE("thematic: ambiguous terms never trigger and block neutrals") {
    Resources r;
    CHECK(r.annotate("Сбербанк простой").empty());
  }

  TEST_CASE("thematic: person mentions only yield neutrals") {
    Resources r;
    CHECK(r.annotate("Иван Петров хороший").empty());
  }

  TEST_CASE("neutral examples") {
    Resources r;
    auto ex = r.annotate("Сбербанк объявил о начале ребрендинга");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == Label::neutral);
    CHECK(ex[0].part == Part::thematic);
    CHECK(ex[0].topic == "banks");
    CHECK_FALSE(ex[0].trigger);
    CHECK(ex[0].text == "MASK объявил о начале ребрендинга");

    ex = r.annotate("Иван Петров открыл обычный вклад");
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].part == Part::general);
    CHECK(ex[0].topic == "persons");
    CHECK(ex[0].text == "MASK открыл обычный вклад");

    // Any sentiment word, even one out of reach, suppresses neutrals.
    CHECK(r.annotate("Сбербанк раз два три четыре пять шесть хороший").empty());
  }

  TEST_CASE("extract_neutral equals the complement on the synthetic corpus") {
    const test::SynthWorld w(300, 13);
    std::size_t neutral = 0;
    for (const auto& s : w.sentences) {
      const auto ms = w.resources.mentions(s);
      const auto got = extract_neutral(s, ms, w.resources.lexicon, w.resources.rules);
      std::vector<std::string> keys;
      for (const auto& t : s.tokens) keys.push_back(utf8::to_lower(t.text));
      const bool has_sentiment = !oracle::scan(keys, w.lexicon.sentiment_terms()).empty();
      if (has_sentiment) {
        CHECK(got.empty());
      } else {
        CHECK(got.size() == ms.size());
      }
      neutral += got.size();
    }
    CHECK(neutral > 0);
  }

  TEST_CASE("negation filter") {
    Resources r;
    CHECK(r.annotate("он не герой").empty());
    CHECK(r.annotate("Ни разу не был героем, он герой").size() == 1);
    CHECK(r.annotate("не раз два три герой").size() == 1);
    CHECK(r.annotate("не раз два герой").empty());
    CHECK(r.annotate("Сбербанк не хороший").empty());

    const auto s = test::sentence("НЕ , , герой");
    CHECK_FALSE(negation_filter(s, {3, 3}, r.rules));
    CHECK(negation_filter(test::sentence("герой"), {0, 0}, r.rules));
  }

  TEST_CASE("quotation filter") {
    AnnotationRules rules;
    auto keep = [&](const std::string& text, std::size_t i) {
      return quotation_filter(test::sentence(text), {i, i}, rules);
    };
    CHECK_FALSE(keep("фильм «Герой» вышел", 2));
    CHECK(keep("фильм Герой вышел", 1));
    CHECK(keep("он \" герой", 2));
    CHECK_FALSE(keep("« он „ герой “ »", 3));
    CHECK(keep("« он „ герой »", 3));  // unclosed inner quote leaves » unmatched
    CHECK(keep("« он » герой", 3));

    Resources r;
    CHECK(r.annotate("фильм «Герой» вышел").empty());
    CHECK(r.annotate("Сбербанк «хороший»").empty());
  }

  TEST_CASE("mask_target") {
    const auto s = test::sentence("Сбербанк повысил ставку");
    CHECK(mask_target(s, {0, 0}) == "MASK повысил ставку");
    CHECK(mask_target(test::sentence("Клиенты Альфа Банк, довольны"), {1, 2}) ==
          "Клиенты MASK, довольны");
    CHECK_THROWS_AS(mask_target(s, {2, 3}), DataError);
    CHECK_THROWS_AS(mask_target(s, {2, 1}), DataError);
  }

  TEST_CASE("sentences that already contain the mask token are skipped") {
    Resources r;
    CHECK(r.annotate("MASK герой").empty());
  }

  TEST_CASE("word_distance") {
    const auto s = test::sentence("а , б в г");
    CHECK(word_distance(s, {0, 0}, {4, 4}) == 2u);
    CHECK(word_distance(s, {4, 4}, {0, 0}) == 2u);
    CHECK(word_distance(s, {0, 2}, {2, 3}) == std::nullopt);
    CHECK(word_distance(s, {2, 2}, {3, 3}) == 0u);
  }

  TEST_CASE("rules validation") {
    AnnotationRules r;
    CHECK_NOTHROW(r.validate());
    r.max_distance_words = 0;
    CHECK_THROWS_AS(r.validate(), ConfigError);
    r = {};
    r.negation_window = 0;
    CHECK_THROWS_AS(r.validate(), ConfigError);
  }

  TEST_CASE("500 sentences: output equals the brute-force rule evaluation") {
    const test::SynthWorld w(500, 2024);
    const auto got = w.annotate();
    const auto expected = w.annotate_oracle();
    CHECK(got.size() > 500);
    CHECK(oracle::canonical(got) == oracle::canonical(expected));
    std::map<std::pair<Part, Label>, int> counts;
    for (const auto& e : got) counts[{e.part, e.label}]++;
    CHECK(counts.size() == 6);  // every part/label combination occurs
  }

  TEST_CASE("500 sentences: invariants") {
    const test::SynthWorld w(500, 99);
    std::map<std::string, const Sentence*> by_id;
    for (const auto& s : w.sentences) by_id[s.id] = &s;
    for (const auto& e : w.annotate()) {
      CHECK(mask_tokens(e.text) == 1);
      const auto& s = *by_id.at(e.source_sentence_id);
      // Putting the surface back restores the sentence.
      const auto at = e.text.find("MASK");
      auto restored = e.text;
      restored.replace(at, 4, e.target_surface);
      CHECK(restored == s.text);

      if (e.label == Label::neutral) {
        CHECK_FALSE(e.trigger);
        continue;
      }
      REQUIRE(e.trigger);
      CHECK(w.lexicon.polarities.at(*e.trigger).count(e.label));
      CHECK_FALSE(w.lexicon.ambiguous(*e.trigger));
      if (e.part == Part::general) {
        CHECK(e.target_surface.size() > 0);
        CHECK(utf8::to_lower(e.target_surface) == *e.trigger);
        continue;
      }
      // Some occurrence of the trigger near the target passes both filters.
      std::vector<std::string> keys;
      for (const auto& t : s.tokens) keys.push_back(utf8::to_lower(t.text));
      // The id records the target range as ".../first-last/label".
      const auto range = e.id.substr(e.id.rfind('/', e.id.rfind('/') - 1) + 1);
      const std::size_t target_first = std::stoul(range.substr(0, range.find('-')));
      const std::size_t target_last = std::stoul(range.substr(range.find('-') + 1));
      bool justified = false;
      for (const auto& o : oracle::scan(keys, w.lexicon.sentiment_terms())) {
        if (o.phrase != *e.trigger) continue;
        const auto d = word_distance(s, {target_first, target_last}, {o.first, o.last});
        if (!d || *d > 4) continue;
        if (negation_filter(s, {o.first, o.last}, w.resources.rules) &&
            quotation_filter(s, {o.first, o.last}, w.resources.rules)) {
          justified = true;
        }
      }
      CHECK_MESSAGE(justified, e.id);
    }
  }

  TEST_CASE("determinism") {
    const test::SynthWorld w(300, 7);
    CHECK(w.annotate() == w.annotate());
  }
}
