#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsf/annotator.hpp"
#include "dsf/corpus.hpp"
#include "dsf/metrics.hpp"
#include "dsf/sampler.hpp"

namespace dsf::io {

using ordered_json = nlohmann::ordered_json;

// Example JSONL with the fixed field order
// id, text, label, part, topic, target_surface, source_sentence_id, trigger.
ordered_json to_json(const LabeledExample& e);
LabeledExample example_from_json(const nlohmann::json& j, const std::string& where);

void write_example(std::ostream& out, const LabeledExample& e);
void write_examples(const std::string& path, std::span<const LabeledExample> examples);

// Missing "part" reads as benchmark; only id, text and label are required.
std::vector<LabeledExample> read_examples(const std::string& path);

// Sentence JSONL: {"id","doc_id","text","start","end"}.
void write_sentence(std::ostream& out, const Sentence& s);
std::vector<Sentence> read_sentences(const std::string& path, const TextConfig& cfg = {});

ordered_json to_json(const StagePlan& plan);
StagePlan plan_from_json(const nlohmann::json& j);
void write_plan(const std::string& path, const StagePlan& plan);
StagePlan read_plan(const std::string& path);

ordered_json to_json(const MetricsReport& r, const ConfusionCounts& c);

// Prediction JSONL {"id","label"}.
std::unordered_map<std::string, Label> read_predictions(const std::string& path);

// Joins gold examples and predictions on id. Every gold id needs exactly one
// prediction; predictions for unknown ids are an error.
ConfusionCounts join_and_count(const std::vector<LabeledExample>& gold,
                               const std::unordered_map<std::string, Label>& pred);

// Writes `contents` and a trailing newline if missing.
void write_text(const std::string& path, const std::string& contents);

std::size_t count_lines(const std::string& path);

}  // namespace dsf::io
