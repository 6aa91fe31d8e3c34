#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsf/corpus.hpp"
#include "dsf/labels.hpp"
#include "dsf/phrase_matcher.hpp"

namespace dsf {

enum class PartOfSpeech { noun, adjective, verb, phrase, other };

std::string_view to_string(PartOfSpeech pos);

// Bit set of lexicon categories.
enum Category : std::uint8_t {
  kPersonReference = 1 << 0,
  kCompanyReference = 1 << 1,
  kGeneral = 1 << 2,
};

// One sense of a lexicon term.
struct LexiconEntry {
  std::string term;  // lower-cased, single spaces
  PartOfSpeech pos = PartOfSpeech::other;
  Label polarity = Label::neutral;
  bool ambiguous = false;  // the term has senses of differing polarity
  std::uint8_t categories = kGeneral;
  std::optional<std::string> source;
};

struct SentimentMatch {
  const LexiconEntry* entry = nullptr;
  TokenRange tokens;
  Label polarity = Label::neutral;
  bool ambiguous = false;
};

// Immutable after construction; safe to share across threads.
class Lexicon {
 public:
  explicit Lexicon(std::vector<LexiconEntry> entries, MatchOptions options = {});

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const MatchOptions& options() const { return options_; }

  // Entries whose first term key equals `first_key`.
  std::vector<const LexiconEntry*> by_first_token(std::string_view first_key) const;

  // Maximal non-overlapping matches of positive, negative or ambiguous terms.
  // Terms whose only senses are neutral are not sentiment words.
  std::vector<SentimentMatch> find_sentiment_words(const Sentence& sentence) const;
  std::vector<SentimentMatch> find_sentiment_words(std::span<const std::string> keys) const;

 private:
  std::vector<LexiconEntry> entries_;
  MatchOptions options_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> index_;
  PhraseMatcher matcher_;
};

// TSV: term, pos, polarity, category (';'-separated), source (optional).
// '#' lines and blank lines are ignored.
Lexicon load_lexicon(const std::string& path, MatchOptions options = {});
Lexicon parse_lexicon(std::istream& in, const std::string& origin, MatchOptions options = {});

struct SeedList {
  std::set<std::string> positive;
  std::set<std::string> negative;
};

// Monosemous positive/negative nouns usable as person or company references.
SeedList seed_references(const Lexicon& lexicon);

// Two plain-text word lists, one term per line.
SeedList load_seed_list(const std::string& positive_path, const std::string& negative_path);

struct SeedMatch {
  TokenRange tokens;
  std::string term;
  Label polarity = Label::neutral;
};

class SeedMatcher {
 public:
  SeedMatcher(const SeedList& seeds, MatchOptions options = {});

  std::vector<SeedMatch> find(const Sentence& sentence) const;
  std::vector<SeedMatch> find(std::span<const std::string> keys) const;
  const MatchOptions& options() const { return options_; }

 private:
  struct Seed {
    std::string term;
    Label polarity;
  };
  std::vector<Seed> seeds_;
  MatchOptions options_;
  PhraseMatcher matcher_;
};

}  // namespace dsf
