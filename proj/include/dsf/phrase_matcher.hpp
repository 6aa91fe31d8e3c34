#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsf/corpus.hpp"

namespace dsf {

// How surface tokens are turned into comparison keys: lower-casing always,
// inflection-suffix stripping when enabled.
struct MatchOptions {
  bool strip_suffixes = false;
  std::vector<std::string> suffixes = default_suffixes();
  std::size_t min_stem = 3;  // code points that must remain after stripping

  std::string key(std::string_view token) const;

  friend bool operator==(const MatchOptions&, const MatchOptions&) = default;

  static std::vector<std::string> default_suffixes();
};

// Keys for every token of a sentence, in token order.
std::vector<std::string> token_keys(const Sentence& sentence, const MatchOptions& opts);

// Keys for a dictionary phrase; punctuation inside the phrase is kept as its
// own key so "из-за" matches the three tokens it tokenizes into.
std::vector<std::string> phrase_keys(std::string_view phrase, const MatchOptions& opts,
                                     const TextConfig& text = {});

// Inclusive token index range.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const TokenRange&, const TokenRange&) = default;
  friend auto operator<=>(const TokenRange&, const TokenRange&) = default;
};

// Trie over key sequences. Matching walks the trie from every start position
// and keeps the leftmost-longest non-overlapping hits, so a sentence of n
// tokens costs O(n * longest phrase).
class PhraseMatcher {
 public:
  struct Hit {
    TokenRange range;
    std::span<const std::uint32_t> values;
  };

  void add(std::span<const std::string> keys, std::uint32_t value);
  bool empty() const { return nodes_.size() <= 1; }

  std::vector<Hit> match(std::span<const std::string> keys) const;

 private:
  struct Node {
    std::unordered_map<std::string, std::uint32_t> children;
    std::vector<std::uint32_t> values;
  };
  std::vector<Node> nodes_ = std::vector<Node>(1);
};

}  // namespace dsf
