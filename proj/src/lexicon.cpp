#include "dsf/lexicon.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dsf/error.hpp"
#include "dsf/utf8.hpp"

namespace dsf {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Lower-cased term with internal whitespace collapsed.
std::string canonical_term(std::string_view raw) {
  std::istringstream words{utf8::to_lower(raw)};
  std::string out, w;
  while (words >> w) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::optional<PartOfSpeech> parse_pos(const std::string& s) {
  const auto v = utf8::to_lower(s);
  if (v == "noun" || v == "n") return PartOfSpeech::noun;
  if (v == "adj" || v == "adjective") return PartOfSpeech::adjective;
  if (v == "verb" || v == "v") return PartOfSpeech::verb;
  if (v == "phrase") return PartOfSpeech::phrase;
  if (v == "other" || v == "adv" || v == "adverb") return PartOfSpeech::other;
  return std::nullopt;
}

std::optional<std::uint8_t> parse_categories(const std::string& s) {
  std::uint8_t mask = 0;
  for (const auto& part : split(s, ';')) {
    const auto v = utf8::to_lower(trim(part));
    if (v.empty() || v == "-") continue;
    if (v == "person_reference") mask |= kPersonReference;
    else if (v == "company_reference") mask |= kCompanyReference;
    else if (v == "general") mask |= kGeneral;
    else return std::nullopt;
  }
  return mask == 0 ? static_cast<std::uint8_t>(kGeneral) : mask;
}

bool is_sentiment(Label l) { return l != Label::neutral; }

}  // namespace

std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return "noun";
    case PartOfSpeech::adjective: return "adjective";
    case PartOfSpeech::verb: return "verb";
    case PartOfSpeech::phrase: return "phrase";
    case PartOfSpeech::other: return "other";
  }
  return "other";
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries, MatchOptions options)
    : entries_(std::move(entries)), options_(std::move(options)) {
  std::map<std::string, std::set<Label>> polarities;
  for (const auto& e : entries_) polarities[e.term].insert(e.polarity);
  for (auto& e : entries_) e.ambiguous = polarities[e.term].size() > 1;

  for (std::uint32_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const auto keys = phrase_keys(e.term, options_);
    if (keys.empty()) continue;
    index_[keys.front()].push_back(i);
    if (is_sentiment(e.polarity) || e.ambiguous) matcher_.add(keys, i);
  }
}

std::vector<const LexiconEntry*> Lexicon::by_first_token(std::string_view first_key) const {
  std::vector<const LexiconEntry*> out;
  if (auto it = index_.find(std::string(first_key)); it != index_.end()) {
    for (auto i : it->second) out.push_back(&entries_[i]);
  }
  return out;
}

std::vector<SentimentMatch> Lexicon::find_sentiment_words(const Sentence& sentence) const {
  return find_sentiment_words(token_keys(sentence, options_));
}

std::vector<SentimentMatch> Lexicon::find_sentiment_words(
    std::span<const std::string> keys) const {
  std::vector<SentimentMatch> out;
  for (const auto& hit : matcher_.match(keys)) {
    // Values are in file order; report the first polar sense.
    const LexiconEntry* chosen = &entries_[hit.values.front()];
    for (auto v : hit.values) {
      if (is_sentiment(entries_[v].polarity)) {
        chosen = &entries_[v];
        break;
      }
    }
    out.push_back({chosen, hit.range, chosen->polarity, chosen->ambiguous});
  }
  return out;
}

Lexicon parse_lexicon(std::istream& in, const std::string& origin, MatchOptions options) {
  std::vector<LexiconEntry> entries;
  std::map<std::pair<std::string, Label>, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto cols = split(line, '\t');
    if (cols.size() < 4 || cols.size() > 5) {
      throw DataError(where + "expected 4 or 5 tab-separated columns, got " +
                      std::to_string(cols.size()));
    }
    LexiconEntry e;
    e.term = canonical_term(cols[0]);
    if (e.term.empty()) throw DataError(where + "empty term");
    auto pos = parse_pos(trim(cols[1]));
    if (!pos) throw DataError(where + "unknown part of speech '" + trim(cols[1]) + "'");
    e.pos = *pos;
    auto pol = parse_label(utf8::to_lower(trim(cols[2])));
    if (!pol) throw DataError(where + "unknown polarity '" + trim(cols[2]) + "'");
    e.polarity = *pol;
    auto cats = parse_categories(cols[3]);
    if (!cats) throw DataError(where + "unknown category in '" + trim(cols[3]) + "'");
    e.categories = *cats;
    if (cols.size() == 5 && !trim(cols[4]).empty()) e.source = trim(cols[4]);

    // Repeated (term, polarity) rows describe the same sense; merge them.
    auto key = std::make_pair(e.term, e.polarity);
    if (auto it = seen.find(key); it != seen.end()) {
      entries[it->second].categories |= e.categories;
      continue;
    }
    seen.emplace(std::move(key), entries.size());
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw DataError(origin + ": empty lexicon");
  return Lexicon(std::move(entries), std::move(options));
}

Lexicon load_lexicon(const std::string& path, MatchOptions options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon: " + path);
  return parse_lexicon(in, path, std::move(options));
}

SeedList seed_references(const Lexicon& lexicon) {
  SeedList seeds;
  for (const auto& e : lexicon.entries()) {
    if (e.pos != PartOfSpeech::noun || e.ambiguous) continue;
    if ((e.categories & (kPersonReference | kCompanyReference)) == 0) continue;
    if (e.polarity == Label::positive) seeds.positive.insert(e.term);
    else if (e.polarity == Label::negative) seeds.negative.insert(e.term);
  }
  return seeds;
}

namespace {

std::set<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open seed list: " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.insert(canonical_term(t));
  }
  return out;
}

}  // namespace

SeedList load_seed_list(const std::string& positive_path, const std::string& negative_path) {
  SeedList seeds{load_word_list(positive_path), load_word_list(negative_path)};
  for (const auto& t : seeds.positive) {
    if (seeds.negative.count(t)) {
      throw DataError("seed term '" + t + "' is listed as both positive and negative");
    }
  }
  return seeds;
}

SeedMatcher::SeedMatcher(const SeedList& seeds, MatchOptions options)
    : options_(std::move(options)) {
  auto add = [&](const std::set<std::string>& terms, Label polarity) {
    for (const auto& t : terms) {
      const auto keys = phrase_keys(t, options_);
      if (keys.empty()) continue;
      matcher_.add(keys, static_cast<std::uint32_t>(seeds_.size()));
      seeds_.push_back({t, polarity});
    }
  };
  for (const auto& t : seeds.positive) {
    if (seeds.negative.count(t)) {
      throw DataError("seed term '" + t + "' is listed as both positive and negative");
    }
  }
  add(seeds.positive, Label::positive);
  add(seeds.negative, Label::negative);
}

std::vector<SeedMatch> SeedMatcher::find(const Sentence& sentence) const {
  return find(token_keys(sentence, options_));
}

std::vector<SeedMatch> SeedMatcher::find(std::span<const std::string> keys) const {
  std::vector<SeedMatch> out;
  for (const auto& hit : matcher_.match(keys)) {
    // With stripping, distinct seeds can share a key; the first added wins.
    const auto& seed = seeds_[hit.values.front()];
    out.push_back({hit.range, seed.term, seed.polarity});
  }
  return out;
}

}  // namespace dsf
