#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dsf/corpus.hpp"
#include "dsf/entities.hpp"
#include "dsf/labels.hpp"
#include "dsf/lexicon.hpp"

namespace dsf {

// A masked training example. `text` carries exactly one mask token.
struct LabeledExample {
  std::string id;
  std::string text;
  Label label = Label::neutral;
  Part part = Part::general;
  std::string topic;
  std::string target_surface;
  std::string source_sentence_id;
  std::optional<std::string> trigger;  // absent for neutral examples

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct AnnotationRules {
  std::size_t max_distance_words = 4;
  std::size_t negation_window = 3;  // word tokens before the trigger
  std::unordered_set<std::string> negation_particles = {"не", "ни"};
  std::vector<QuotePair> quote_pairs = TextConfig::default_quote_pairs();
  std::string mask_token = "MASK";
  std::string general_topic = "persons";

  void validate() const;
};

// Word tokens strictly between the nearest edges of two disjoint ranges.
// Overlapping ranges yield nullopt.
std::optional<std::size_t> word_distance(const Sentence& sentence, TokenRange a, TokenRange b);

bool negation_filter(const Sentence& sentence, TokenRange trigger, const AnnotationRules& rules);
bool quotation_filter(const Sentence& sentence, TokenRange trigger, const AnnotationRules& rules);

// Sentence text with the target tokens replaced by a single mask token.
std::string mask_target(const Sentence& sentence, TokenRange target,
                        std::string_view mask_token = "MASK");

std::vector<LabeledExample> extract_general(const Sentence& sentence, const SeedMatcher& seeds,
                                            const AnnotationRules& rules);

std::vector<LabeledExample> extract_thematic(const Sentence& sentence,
                                             const std::vector<EntityMention>& mentions,
                                             const Lexicon& lexicon,
                                             const AnnotationRules& rules);

std::vector<LabeledExample> extract_neutral(const Sentence& sentence,
                                            const std::vector<EntityMention>& mentions,
                                            const Lexicon& lexicon,
                                            const AnnotationRules& rules);

// All three extractors on one sentence, in canonical order (target start,
// target end, trigger start, label). Neutral examples are only produced when
// the sentence has neither sentiment words nor seed words.
std::vector<LabeledExample> annotate_sentence(const Sentence& sentence,
                                              const std::vector<EntityMention>& mentions,
                                              const Lexicon& lexicon, const SeedMatcher& seeds,
                                              const AnnotationRules& rules);

// Same, with token keys already computed under lexicon.options().
std::vector<LabeledExample> annotate_sentence(const Sentence& sentence,
                                              std::span<const std::string> lexicon_keys,
                                              const std::vector<EntityMention>& mentions,
                                              const Lexicon& lexicon, const SeedMatcher& seeds,
                                              const AnnotationRules& rules);

}  // namespace dsf
