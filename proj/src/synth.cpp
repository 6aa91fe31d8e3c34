#include "dsf/synth.hpp"

#include <array>
#include <fstream>
#include <string_view>

#include <json.hpp>

#include "dsf/error.hpp"
#include "dsf/random.hpp"
#include "dsf/utf8.hpp"

namespace dsf::synth {

namespace {

constexpr std::array<std::string_view, 24> kFillers = {
    "сегодня", "вчера",   "клиенты", "офис",    "отделение", "приложение",
    "карта",   "кредит",  "вклад",   "тариф",   "связь",     "интернет",
    "город",   "решение", "новости", "сервис",  "поддержка", "очередь",
    "ставка",  "процент", "договор", "звонок",  "работает",  "говорят"};

// Inflected surface forms as they would appear in text.
constexpr std::array<std::string_view, 9> kPositive = {
    "хороший", "отличный", "надежный", "удобный", "выгодный",
    "радует",  "на высоте", "спасибо", "лидер"};
constexpr std::array<std::string_view, 9> kNegative = {
    "плохой", "ужасный", "медленный", "дорогой",     "обманул",
    "подвел", "из рук вон плохо", "отстой", "лохотрон"};
constexpr std::array<std::string_view, 4> kAmbiguous = {"простой", "крутой", "резкий", "сильный"};
constexpr std::array<std::string_view, 2> kNeutralTerms = {"обычный", "новый"};
constexpr std::array<std::string_view, 6> kSeeds = {"молодец", "герой",   "умница",
                                                    "мошенник", "вор", "негодяй"};
constexpr std::array<std::string_view, 8> kOrgs = {"Сбербанк", "ВТБ",     "Альфа Банк", "Тинькофф",
                                                   "МТС",      "Билайн", "Мегафон",    "Ростелеком"};
constexpr std::array<std::string_view, 4> kPersons = {"Иван Петров", "Мария", "Олег Смирнов",
                                                      "Анна"};
constexpr std::array<std::string_view, 2> kNegations = {"не", "ни"};
constexpr std::array<std::string_view, 5> kTerminators = {".", "!", "?", "...", "!!"};
constexpr std::array<std::array<std::string_view, 2>, 2> kQuotes = {{{"«", "»"}, {"\"", "\""}}};

template <std::size_t N>
std::string_view pick(detail::Generator& g, const std::array<std::string_view, N>& xs) {
  return xs[g.below(N)];
}

// Basic Latin and Cyrillic only; enough for the generator's vocabulary.
char32_t to_upper(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 32;
  if (cp >= 0x0430 && cp <= 0x044F) return cp - 32;
  if (cp == 0x0451) return 0x0401;
  return cp;
}

std::string capitalize(std::string s) {
  const auto [cp, len] = utf8::decode(s, 0);
  const auto up = to_upper(cp);
  if (up == cp) return s;
  std::string head;
  utf8::append(head, up);
  return head + s.substr(len);
}

}  // namespace

std::uint64_t detail::Generator::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return splitmix64(state_);
}

std::string detail::Generator::sentence() {
  const auto length = 4 + below(14);
  std::string out;
  auto word = [&](std::string_view w) {
    if (!out.empty()) out += ' ';
    out += w;
  };
  bool in_quote = false;
  std::size_t quote_kind = 0;
  std::size_t quote_left = 0;
  // Roughly a third of the sentences carry no sentiment or seed words.
  const bool plain = below(10) < 3;
  for (std::size_t i = 0; i < length; ++i) {
    auto r = below(100);
    if (plain && r >= 40 && r < 70) r = below(40);
    if (r < 40) word(pick(*this, kFillers));
    else if (r < 50) word(pick(*this, kPositive));
    else if (r < 60) word(pick(*this, kNegative));
    else if (r < 63) word(pick(*this, kAmbiguous));
    else if (r < 65) word(pick(*this, kNeutralTerms));
    else if (r < 70) word(pick(*this, kSeeds));
    else if (r < 79) word(pick(*this, kOrgs));
    else if (r < 83) word(pick(*this, kPersons));
    else if (r < 89) word(pick(*this, kNegations));
    else if (r < 91) word(std::to_string(below(1000)));
    else if (r < 92) word("https://example.org/p" + std::to_string(below(100)));
    else if (r < 93) word("@user" + std::to_string(below(50)));
    else if (r < 97 && !out.empty()) out += ',';
    else if (!in_quote) {
      in_quote = true;
      quote_kind = below(kQuotes.size());
      quote_left = 1 + below(3);
      word(kQuotes[quote_kind][0]);
      out += pick(*this, kFillers);
      continue;
    }
    if (in_quote && --quote_left == 0) {
      out += kQuotes[quote_kind][1];
      in_quote = false;
    }
  }
  word(pick(*this, kFillers));
  if (in_quote) out += kQuotes[quote_kind][1];
  out += pick(*this, kTerminators);
  return capitalize(out);
}

std::vector<Document> generate(const CorpusSpec& spec) {
  std::vector<Document> docs;
  generate(spec, [&](const Document& d) { docs.push_back(d); });
  return docs;
}

std::string lexicon_tsv() {
  return "# term\tpos\tpolarity\tcategory\n"
         "хороший\tadj\tpositive\tgeneral\n"
         "отличный\tadj\tpositive\tgeneral\n"
         "надежный\tadj\tpositive\tgeneral\n"
         "удобный\tadj\tpositive\tgeneral\n"
         "выгодный\tadj\tpositive\tgeneral\n"
         "радует\tverb\tpositive\tgeneral\n"
         "на высоте\tphrase\tpositive\tgeneral\n"
         "спасибо\tother\tpositive\tgeneral\n"
         "лидер\tnoun\tpositive\tcompany_reference\n"
         "плохой\tadj\tnegative\tgeneral\n"
         "ужасный\tadj\tnegative\tgeneral\n"
         "медленный\tadj\tnegative\tgeneral\n"
         "дорогой\tadj\tnegative\tgeneral\n"
         "обманул\tverb\tnegative\tgeneral\n"
         "подвел\tverb\tnegative\tgeneral\n"
         "из рук вон плохо\tphrase\tnegative\tgeneral\n"
         "отстой\tnoun\tnegative\tgeneral\n"
         "лохотрон\tnoun\tnegative\tcompany_reference\n"
         "молодец\tnoun\tpositive\tperson_reference\n"
         "герой\tnoun\tpositive\tperson_reference\n"
         "умница\tnoun\tpositive\tperson_reference\n"
         "мошенник\tnoun\tnegative\tperson_reference;company_reference\n"
         "вор\tnoun\tnegative\tperson_reference\n"
         "негодяй\tnoun\tnegative\tperson_reference\n"
         "простой\tadj\tpositive\tgeneral\n"
         "простой\tadj\tnegative\tgeneral\n"
         "крутой\tadj\tpositive\tgeneral\n"
         "крутой\tadj\tnegative\tgeneral\n"
         "резкий\tadj\tnegative\tgeneral\n"
         "резкий\tadj\tneutral\tgeneral\n"
         "сильный\tadj\tpositive\tgeneral\n"
         "сильный\tadj\tneutral\tgeneral\n"
         "обычный\tadj\tneutral\tgeneral\n"
         "новый\tadj\tneutral\tgeneral\n";
}

std::string banks_gazetteer_tsv() {
  return "сбербанк\tORG\tSberbank\n"
         "втб\tORG\tVTB\n"
         "альфа банк\tORG\tAlfa-Bank\n"
         "тинькофф\tORG\tTinkoff\n"
         "иван петров\tPER\n"
         "мария\tPER\n"
         "олег смирнов\tPER\n"
         "анна\tPER\n";
}

std::string telecom_gazetteer_tsv() {
  return "мтс\tORG\tMTS\n"
         "билайн\tORG\tBeeline\n"
         "мегафон\tORG\tMegafon\n"
         "ростелеком\tORG\tRostelecom\n";
}

void write_fixture(const std::filesystem::path& dir, const CorpusSpec& spec) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    out << text;
  };
  write("lexicon.tsv", lexicon_tsv());
  write("banks.tsv", banks_gazetteer_tsv());
  write("telecom.tsv", telecom_gazetteer_tsv());
  std::ofstream out(dir / "corpus.jsonl", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "corpus.jsonl").string());
  generate(spec, [&](const Document& d) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    out << j.dump() << '\n';
  });
}

}  // namespace dsf::synth
