#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsf/corpus.hpp"
#include "dsf/phrase_matcher.hpp"

namespace dsf {

enum class EntityType { organization, person, other };

std::string_view to_string(EntityType t);

// Maps recognizer labels (ORG, PER, LOC, ...) and our own names onto the
// three types. Unknown labels yield nullopt.
std::optional<EntityType> parse_entity_type(std::string_view label);

struct EntityMention {
  std::string sentence_id;
  TokenRange tokens;
  std::string surface;
  EntityType etype = EntityType::other;
  std::optional<std::string> canonical;
  std::string topic;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

class Gazetteer {
 public:
  struct Entry {
    EntityType etype = EntityType::organization;
    std::optional<std::string> canonical;
  };

  Gazetteer(std::string topic, MatchOptions options = {});

  // `surface` is case-folded on insertion. Later duplicates are ignored.
  void add(std::string_view surface, Entry entry);

  const std::string& topic() const { return topic_; }
  const std::unordered_map<std::string, Entry>& entries() const { return entries_; }
  const MatchOptions& options() const { return options_; }

  std::vector<EntityMention> match(const Sentence& sentence) const;
  std::vector<EntityMention> match(const Sentence& sentence,
                                   std::span<const std::string> keys) const;

 private:
  std::string topic_;
  MatchOptions options_;
  std::unordered_map<std::string, Entry> entries_;
  std::vector<std::string> surfaces_;  // matcher value -> surface
  PhraseMatcher matcher_;
};

// TSV: surface<TAB>etype<TAB>canonical (canonical optional).
Gazetteer load_gazetteer(const std::string& path, std::string topic, MatchOptions options = {});

std::vector<EntityMention> match_gazetteer(const Sentence& sentence, const Gazetteer& gazetteer);

using MentionIndex = std::unordered_map<std::string, std::vector<EntityMention>>;

// Optional resolver used to validate spans and fill in surfaces.
using SentenceLookup = std::function<const Sentence*(std::string_view sentence_id)>;

// JSONL: {"sentence_id": s, "spans": [{"start": i, "end": j, "type": t}]}
// with inclusive token indices. Records for the same sentence accumulate.
MentionIndex import_annotations(const std::string& path, std::string topic,
                                const SentenceLookup& lookup = {});

// Union of mention lists for one sentence, validated against its tokens,
// deduplicated by span (first occurrence wins) and sorted by span.
std::vector<EntityMention> merge_mentions(const Sentence& sentence,
                                          std::vector<EntityMention> mentions);

}  // namespace dsf
