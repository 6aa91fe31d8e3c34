#include "dsf/phrase_matcher.hpp"

#include <algorithm>

#include "dsf/utf8.hpp"

namespace dsf {

std::vector<std::string> MatchOptions::default_suffixes() {
  return {"ями", "ами", "ого", "его", "ому", "ему", "ыми", "ими", "ой", "ей",
          "ом",  "ем",  "ам",  "ям",  "ах",  "ях",  "ую",  "юю",  "ая", "яя",
          "ое",  "ее",  "ые",  "ие",  "ый",  "ий",  "ов",  "ев",  "а",  "я",
          "о",   "е",   "ы",   "и",   "у",   "ю",   "ь"};
}

std::string MatchOptions::key(std::string_view token) const {
  std::string lowered = utf8::to_lower(token);
  if (!strip_suffixes) return lowered;
  // Longest configured suffix that leaves a long enough stem.
  const std::size_t len = utf8::length(lowered);
  std::size_t best = 0;
  for (const auto& suf : suffixes) {
    if (suf.size() <= best || !lowered.ends_with(suf)) continue;
    if (len - utf8::length(suf) >= min_stem) best = suf.size();
  }
  lowered.resize(lowered.size() - best);
  return lowered;
}

std::vector<std::string> token_keys(const Sentence& sentence, const MatchOptions& opts) {
  std::vector<std::string> keys;
  keys.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) keys.push_back(opts.key(t.text));
  return keys;
}

std::vector<std::string> phrase_keys(std::string_view phrase, const MatchOptions& opts,
                                     const TextConfig& text) {
  std::vector<std::string> keys;
  for (const auto& t : tokenize(phrase, text)) keys.push_back(opts.key(t.text));
  return keys;
}

void PhraseMatcher::add(std::span<const std::string> keys, std::uint32_t value) {
  if (keys.empty()) return;
  std::uint32_t node = 0;
  for (const auto& k : keys) {
    auto it = nodes_[node].children.find(k);
    if (it == nodes_[node].children.end()) {
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].children.emplace(k, next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = it->second;
    }
  }
  auto& vals = nodes_[node].values;
  if (std::find(vals.begin(), vals.end(), value) == vals.end()) vals.push_back(value);
}

std::vector<PhraseMatcher::Hit> PhraseMatcher::match(std::span<const std::string> keys) const {
  std::vector<Hit> hits;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::uint32_t node = 0;
    std::size_t best_len = 0;
    std::uint32_t best_node = 0;
    for (std::size_t j = i; j < keys.size(); ++j) {
      const auto& children = nodes_[node].children;
      auto it = children.find(keys[j]);
      if (it == children.end()) break;
      node = it->second;
      if (!nodes_[node].values.empty()) {
        best_len = j - i + 1;
        best_node = node;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    hits.push_back({{i, i + best_len - 1}, nodes_[best_node].values});
    i += best_len;
  }
  return hits;
}

}  // namespace dsf
