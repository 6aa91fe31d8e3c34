#include "dsf/entities.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <set>

#include "dsf/error.hpp"
#include "dsf/utf8.hpp"

namespace dsf {

std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::organization: return "organization";
    case EntityType::person: return "person";
    case EntityType::other: return "other";
  }
  return "other";
}

std::optional<EntityType> parse_entity_type(std::string_view label) {
  std::string v(label);
  for (auto& c : v) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  // BIO prefixes from token-level taggers.
  if (v.size() > 2 && (v.starts_with("B-") || v.starts_with("I-"))) v = v.substr(2);
  if (v == "ORG" || v == "ORGANIZATION" || v == "ORGANISATION") return EntityType::organization;
  if (v == "PER" || v == "PERSON") return EntityType::person;
  if (v == "LOC" || v == "LOCATION" || v == "GPE" || v == "MISC" || v == "FAC" ||
      v == "PRODUCT" || v == "EVENT" || v == "OTHER") {
    return EntityType::other;
  }
  return std::nullopt;
}

Gazetteer::Gazetteer(std::string topic, MatchOptions options)
    : topic_(std::move(topic)), options_(std::move(options)) {}

void Gazetteer::add(std::string_view surface, Entry entry) {
  auto lowered = utf8::to_lower(surface);
  if (lowered.empty() || entries_.count(lowered)) return;
  const auto keys = phrase_keys(lowered, options_);
  if (keys.empty()) return;
  matcher_.add(keys, static_cast<std::uint32_t>(surfaces_.size()));
  surfaces_.push_back(lowered);
  entries_.emplace(std::move(lowered), std::move(entry));
}

std::vector<EntityMention> Gazetteer::match(const Sentence& sentence) const {
  return match(sentence, token_keys(sentence, options_));
}

std::vector<EntityMention> Gazetteer::match(const Sentence& sentence,
                                            std::span<const std::string> keys) const {
  std::vector<EntityMention> out;
  for (const auto& hit : matcher_.match(keys)) {
    const auto& entry = entries_.at(surfaces_[hit.values.front()]);
    EntityMention m;
    m.sentence_id = sentence.id;
    m.tokens = hit.range;
    const auto begin = sentence.tokens[hit.range.first].span.start;
    const auto end = sentence.tokens[hit.range.last].span.end;
    m.surface = sentence.text.substr(begin, end - begin);
    m.etype = entry.etype;
    m.canonical = entry.canonical;
    m.topic = topic_;
    out.push_back(std::move(m));
  }
  return out;
}

Gazetteer load_gazetteer(const std::string& path, std::string topic, MatchOptions options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gazetteer: " + path);
  Gazetteer g(std::move(topic), std::move(options));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const auto where = path + ":" + std::to_string(line_no) + ": ";
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty()) {
      throw DataError(where + "expected surface<TAB>etype[<TAB>canonical]");
    }
    auto etype = parse_entity_type(cols[1]);
    if (!etype) throw DataError(where + "unknown entity type '" + cols[1] + "'");
    Gazetteer::Entry e{*etype, std::nullopt};
    if (cols.size() == 3 && !cols[2].empty()) e.canonical = cols[2];
    g.add(cols[0], std::move(e));
  }
  return g;
}

std::vector<EntityMention> match_gazetteer(const Sentence& sentence, const Gazetteer& gazetteer) {
  return gazetteer.match(sentence);
}

MentionIndex import_annotations(const std::string& path, std::string topic,
                                const SentenceLookup& lookup) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open annotation file: " + path);
  MentionIndex index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path + ":" + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": invalid JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("sentence_id") || !rec["sentence_id"].is_string() ||
        !rec.contains("spans") || !rec["spans"].is_array()) {
      throw DataError(where + ": record needs \"sentence_id\" and \"spans\"");
    }
    const auto sid = rec["sentence_id"].get<std::string>();
    const Sentence* sentence = lookup ? lookup(sid) : nullptr;
    auto& bucket = index[sid];
    for (const auto& span : rec["spans"]) {
      if (!span.is_object() || !span.contains("start") || !span["start"].is_number_integer() ||
          !span.contains("end") || !span["end"].is_number_integer() ||
          !span.contains("type") || !span["type"].is_string()) {
        throw DataError(where + " (sentence " + sid + "): span needs integer start/end and type");
      }
      const auto start = span["start"].get<long long>();
      const auto end = span["end"].get<long long>();
      const auto type_label = span["type"].get<std::string>();
      if (start < 0 || end < start) {
        throw DataError(where + " (sentence " + sid + "): invalid span [" +
                        std::to_string(start) + ", " + std::to_string(end) + "]");
      }
      auto etype = parse_entity_type(type_label);
      if (!etype) {
        throw DataError(where + " (sentence " + sid + "): unknown entity type '" +
                        type_label + "'");
      }
      EntityMention m;
      m.sentence_id = sid;
      m.tokens = {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
      m.etype = *etype;
      m.topic = topic;
      if (sentence) {
        if (m.tokens.last >= sentence->tokens.size()) {
          throw DataError(where + " (sentence " + sid + "): span [" + std::to_string(start) +
                          ", " + std::to_string(end) + "] outside " +
                          std::to_string(sentence->tokens.size()) + " tokens");
        }
        const auto b = sentence->tokens[m.tokens.first].span.start;
        const auto e = sentence->tokens[m.tokens.last].span.end;
        m.surface = sentence->text.substr(b, e - b);
        if (auto s = span.find("surface"); s != span.end() && s->is_string() &&
                                           s->get<std::string>() != m.surface) {
          throw DataError(where + " (sentence " + sid + "): surface '" +
                          s->get<std::string>() + "' disagrees with tokens '" + m.surface +
                          "'");
        }
      } else if (auto s = span.find("surface"); s != span.end() && s->is_string()) {
        m.surface = s->get<std::string>();
      }
      bucket.push_back(std::move(m));
    }
  }
  return index;
}

std::vector<EntityMention> merge_mentions(const Sentence& sentence,
                                          std::vector<EntityMention> mentions) {
  std::vector<EntityMention> out;
  std::set<TokenRange> seen;
  for (auto& m : mentions) {
    if (m.tokens.first > m.tokens.last || m.tokens.last >= sentence.tokens.size()) {
      throw DataError("sentence " + sentence.id + ": mention span [" +
                      std::to_string(m.tokens.first) + ", " + std::to_string(m.tokens.last) +
                      "] outside " + std::to_string(sentence.tokens.size()) + " tokens");
    }
    if (!seen.insert(m.tokens).second) continue;
    const auto b = sentence.tokens[m.tokens.first].span.start;
    const auto e = sentence.tokens[m.tokens.last].span.end;
    m.surface = sentence.text.substr(b, e - b);
    m.sentence_id = sentence.id;
    out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.tokens < b.tokens;
  });
  return out;
}

}  // namespace dsf
