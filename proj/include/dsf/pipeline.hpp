#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dsf/annotator.hpp"
#include "dsf/corpus.hpp"
#include "dsf/dedup.hpp"
#include "dsf/entities.hpp"
#include "dsf/lexicon.hpp"
#include "dsf/sampler.hpp"

namespace dsf {

inline constexpr const char* kToolVersion = "0.1.0";

struct IngestOptions {
  TextConfig text;
  bool normalize = true;
  std::optional<LengthBounds> bounds;
};

struct IngestStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t kept = 0;
};

// Split, normalize, re-tokenize and length-filter one document.
std::vector<Sentence> ingest_document(const Document& doc, const IngestOptions& opts,
                                      IngestStats& stats);

// Token-count quantiles of a reference example file (typically a benchmark
// test sample), measured on the same normalized tokenization as the corpus.
LengthBounds bounds_from_reference(const std::string& path, double lower_quantile,
                                   double upper_quantile, const IngestOptions& opts);

struct NamedSource {
  std::string path;
  std::string topic;
};

// Everything the annotator needs, loaded once and shared read-only.
struct AnnotationResources {
  Lexicon lexicon;
  SeedMatcher seeds;
  std::vector<Gazetteer> gazetteers;
  MentionIndex imported;
  AnnotationRules rules;

  std::vector<EntityMention> mentions(const Sentence& sentence) const;
  std::vector<EntityMention> mentions(const Sentence& sentence,
                                      std::span<const std::string> lexicon_keys) const;
  std::vector<LabeledExample> annotate(const Sentence& sentence) const;
};

struct ResourceOptions {
  std::string lexicon;
  std::optional<std::string> seeds_positive;
  std::optional<std::string> seeds_negative;
  std::vector<NamedSource> gazetteers;
  std::vector<NamedSource> annotations;
  bool strip_suffixes = false;
  AnnotationRules rules;
};

AnnotationResources load_resources(const ResourceOptions& opts);

struct RunConfig {
  std::vector<std::string> corpus;
  CorpusReader::Format corpus_format = CorpusReader::Format::automatic;
  std::optional<std::string> abbreviations;
  ResourceOptions resources;
  bool normalize = true;

  std::optional<std::string> length_reference;
  double lower_quantile = 0.05;
  double upper_quantile = 0.95;
  std::optional<LengthBounds> fixed_bounds;

  bool dedup_enabled = true;
  DedupConfig dedup;

  bool flatten_enabled = true;
  std::optional<std::size_t> trigger_cap;

  PlanVariant variant = PlanVariant::three_step;
  std::optional<std::string> benchmark_train;
  std::map<std::string, BalanceSpec> balance;  // keyed by output dataset name

  std::filesystem::path output_dir;
  std::uint64_t rng_seed = 0;
  std::size_t threads = 0;  // 0 = DSF_THREADS or hardware concurrency

  nlohmann::json source;  // effective configuration, for the digest

  // Checks invariants and that every referenced input file exists.
  void validate() const;
};

// Applies "a.b.c=value" overrides; the value is parsed as JSON when possible
// and taken as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& assignment);

// Relative paths resolve against `base_dir`. Missing rng_seed is an error.
RunConfig parse_config(const nlohmann::json& config, const std::filesystem::path& base_dir);

// Reads a JSON config file (the only supported format) and applies overrides.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

// Hex SHA-256.
std::string sha256_hex(std::string_view data);

// Default sample sizes per plan variant: 15000 for single-stage variants,
// 27000 for two-step, 18000 general + 9000 thematic for three-step.
std::map<std::string, BalanceSpec> default_balance(PlanVariant variant, std::uint64_t seed);

// Runs ingest -> annotate -> dedup -> flatten -> balance -> plan and writes the
// output tree atomically. Returns the manifest that was written.
nlohmann::ordered_json run(const RunConfig& config);

std::size_t worker_count(std::size_t requested);

}  // namespace dsf
