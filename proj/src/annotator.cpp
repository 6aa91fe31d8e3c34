#include "dsf/annotator.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "dsf/error.hpp"
#include "dsf/utf8.hpp"

namespace dsf {

namespace {

constexpr std::size_t kNoTrigger = std::numeric_limits<std::size_t>::max();

struct Candidate {
  LabeledExample example;
  TokenRange target;
  std::size_t trigger_start = kNoTrigger;
};

bool has_mask(const Sentence& sentence, const AnnotationRules& rules) {
  return std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                     [&](const Token& t) { return t.text == rules.mask_token; });
}

std::string surface_of(const Sentence& s, TokenRange r) {
  const auto b = s.tokens[r.first].span.start;
  return s.text.substr(b, s.tokens[r.last].span.end - b);
}

std::string example_id(const Sentence& s, Part part, TokenRange target, Label label) {
  std::string id = s.id;
  id += '/';
  id += to_string(part).front();
  id += '/';
  id += std::to_string(target.first);
  id += '-';
  id += std::to_string(target.last);
  id += '/';
  id += to_string(label);
  return id;
}

Candidate make_candidate(const Sentence& s, TokenRange target, Label label, Part part,
                         std::string topic, std::optional<std::string> trigger,
                         std::size_t trigger_start, const AnnotationRules& rules) {
  Candidate c;
  c.target = target;
  c.trigger_start = trigger_start;
  auto& ex = c.example;
  ex.id = example_id(s, part, target, label);
  ex.text = mask_target(s, target, rules.mask_token);
  ex.label = label;
  ex.part = part;
  ex.topic = std::move(topic);
  ex.target_surface = surface_of(s, target);
  ex.source_sentence_id = s.id;
  ex.trigger = std::move(trigger);
  return c;
}

bool passes_filters(const Sentence& s, TokenRange trigger, const AnnotationRules& rules) {
  return negation_filter(s, trigger, rules) && quotation_filter(s, trigger, rules);
}

void general_from(const Sentence& s, const std::vector<SeedMatch>& seeds,
                  const AnnotationRules& rules, std::vector<Candidate>& out) {
  for (const auto& seed : seeds) {
    if (!passes_filters(s, seed.tokens, rules)) continue;
    out.push_back(make_candidate(s, seed.tokens, seed.polarity, Part::general,
                                 rules.general_topic, seed.term, seed.tokens.first, rules));
  }
}

void thematic_from(const Sentence& s, const std::vector<EntityMention>& mentions,
                   const std::vector<SentimentMatch>& matches, const AnnotationRules& rules,
                   std::vector<Candidate>& out) {
  for (const auto& m : mentions) {
    if (m.etype != EntityType::organization) continue;
    bool emitted[2] = {false, false};
    for (const auto& match : matches) {
      if (match.ambiguous || match.polarity == Label::neutral) continue;
      auto& done = emitted[index_of(match.polarity)];
      if (done) continue;
      const auto dist = word_distance(s, m.tokens, match.tokens);
      if (!dist || *dist > rules.max_distance_words) continue;
      if (!passes_filters(s, match.tokens, rules)) continue;
      out.push_back(make_candidate(s, m.tokens, match.polarity, Part::thematic, m.topic,
                                   match.entry->term, match.tokens.first, rules));
      done = true;
    }
  }
}

void neutral_from(const Sentence& s, const std::vector<EntityMention>& mentions,
                  const AnnotationRules& rules, std::vector<Candidate>& out) {
  for (const auto& m : mentions) {
    if (m.etype == EntityType::organization) {
      out.push_back(make_candidate(s, m.tokens, Label::neutral, Part::thematic, m.topic,
                                   std::nullopt, kNoTrigger, rules));
    } else if (m.etype == EntityType::person) {
      out.push_back(make_candidate(s, m.tokens, Label::neutral, Part::general,
                                   rules.general_topic, std::nullopt, kNoTrigger, rules));
    }
  }
}

std::vector<LabeledExample> finish(std::vector<Candidate> cands) {
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(a.target.first, a.target.last, a.trigger_start,
                      index_of(a.example.label)) <
           std::tuple(b.target.first, b.target.last, b.trigger_start,
                      index_of(b.example.label));
  });
  std::vector<LabeledExample> out;
  out.reserve(cands.size());
  for (auto& c : cands) out.push_back(std::move(c.example));
  return out;
}

}  // namespace

void AnnotationRules::validate() const {
  if (max_distance_words < 1) throw ConfigError("max_distance_words must be >= 1");
  if (negation_window < 1) throw ConfigError("negation_window must be >= 1");
  if (mask_token.empty()) throw ConfigError("mask token must be non-empty");
}

std::optional<std::size_t> word_distance(const Sentence& sentence, TokenRange a, TokenRange b) {
  if (b.last < a.first) std::swap(a, b);
  if (a.last >= b.first) return std::nullopt;
  std::size_t n = 0;
  for (auto i = a.last + 1; i < b.first; ++i) n += is_word(sentence.tokens[i]);
  return n;
}

bool negation_filter(const Sentence& sentence, TokenRange trigger, const AnnotationRules& rules) {
  std::size_t seen = 0;
  for (auto i = trigger.first; i > 0 && seen < rules.negation_window;) {
    const auto& t = sentence.tokens[--i];
    if (!is_word(t)) continue;
    ++seen;
    if (rules.negation_particles.count(utf8::to_lower(t.text))) return false;
  }
  return true;
}

bool quotation_filter(const Sentence& sentence, TokenRange trigger, const AnnotationRules& rules) {
  auto closes = [&](const std::string& open, const std::string& glyph) {
    return std::any_of(rules.quote_pairs.begin(), rules.quote_pairs.end(),
                       [&](const QuotePair& p) { return p.open == open && p.close == glyph; });
  };
  auto opens = [&](const std::string& glyph) {
    return std::any_of(rules.quote_pairs.begin(), rules.quote_pairs.end(),
                       [&](const QuotePair& p) { return p.open == glyph; });
  };

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& glyph = sentence.tokens[i].text;
    if (!stack.empty() && closes(sentence.tokens[stack.back()].text, glyph)) {
      if (stack.back() < trigger.first && i > trigger.last) return false;
      stack.pop_back();
    } else if (opens(glyph)) {
      stack.push_back(i);
    }
  }
  return true;
}

std::string mask_target(const Sentence& sentence, TokenRange target, std::string_view mask_token) {
  if (target.first > target.last || target.last >= sentence.tokens.size()) {
    throw DataError("sentence " + sentence.id + ": target span [" +
                    std::to_string(target.first) + ", " + std::to_string(target.last) +
                    "] out of bounds");
  }
  const auto b = sentence.tokens[target.first].span.start;
  const auto e = sentence.tokens[target.last].span.end;
  std::string out;
  out.reserve(sentence.text.size() - (e - b) + mask_token.size());
  out.append(sentence.text, 0, b);
  out.append(mask_token);
  out.append(sentence.text, e);
  return out;
}

std::vector<LabeledExample> extract_general(const Sentence& sentence, const SeedMatcher& seeds,
                                            const AnnotationRules& rules) {
  if (has_mask(sentence, rules)) return {};
  std::vector<Candidate> out;
  general_from(sentence, seeds.find(sentence), rules, out);
  return finish(std::move(out));
}

std::vector<LabeledExample> extract_thematic(const Sentence& sentence,
                                             const std::vector<EntityMention>& mentions,
                                             const Lexicon& lexicon,
                                             const AnnotationRules& rules) {
  if (has_mask(sentence, rules)) return {};
  std::vector<Candidate> out;
  thematic_from(sentence, mentions, lexicon.find_sentiment_words(sentence), rules, out);
  return finish(std::move(out));
}

std::vector<LabeledExample> extract_neutral(const Sentence& sentence,
                                            const std::vector<EntityMention>& mentions,
                                            const Lexicon& lexicon,
                                            const AnnotationRules& rules) {
  if (has_mask(sentence, rules)) return {};
  if (!lexicon.find_sentiment_words(sentence).empty()) return {};
  std::vector<Candidate> out;
  neutral_from(sentence, mentions, rules, out);
  return finish(std::move(out));
}

std::vector<LabeledExample> annotate_sentence(const Sentence& sentence,
                                              const std::vector<EntityMention>& mentions,
                                              const Lexicon& lexicon, const SeedMatcher& seeds,
                                              const AnnotationRules& rules) {
  if (has_mask(sentence, rules)) return {};
  const auto keys = token_keys(sentence, lexicon.options());
  return annotate_sentence(sentence, keys, mentions, lexicon, seeds, rules);
}

std::vector<LabeledExample> annotate_sentence(const Sentence& sentence,
                                              std::span<const std::string> lex_keys,
                                              const std::vector<EntityMention>& mentions,
                                              const Lexicon& lexicon, const SeedMatcher& seeds,
                                              const AnnotationRules& rules) {
  if (has_mask(sentence, rules)) return {};
  const auto matches = lexicon.find_sentiment_words(lex_keys);
  const auto seed_hits = seeds.options() == lexicon.options()
                             ? seeds.find(lex_keys)
                             : seeds.find(sentence);

  std::vector<Candidate> out;
  general_from(sentence, seed_hits, rules, out);
  if (!mentions.empty()) {
    thematic_from(sentence, mentions, matches, rules, out);
    if (matches.empty() && seed_hits.empty()) neutral_from(sentence, mentions, rules, out);
  }
  return finish(std::move(out));
}

}  // namespace dsf
