#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsf/annotator.hpp"

namespace dsf {

enum class BalanceMode { uniform, distribution };

struct BalanceSpec {
  BalanceMode mode = BalanceMode::uniform;
  std::map<Label, double> proportions;  // required for distribution mode
  std::size_t total = 15000;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Mean class shares of the five benchmark training samples
// (positive 14.8%, negative 33.6%, neutral 51.6%).
std::map<Label, double> benchmark_train_proportions();

// Per-class targets indexed by Label: round(total * fraction) with the
// rounding residue given to the class with the largest fraction.
std::array<std::size_t, 3> class_targets(const BalanceSpec& spec);

// Exactly class_targets(spec) examples per class, chosen by an id-keyed
// seeded shuffle and returned in pool order.
std::vector<LabeledExample> balance(std::span<const LabeledExample> pool,
                                    const BalanceSpec& spec);

// Keeps at most `cap` examples per trigger term; examples without a trigger
// pass through. Output keeps pool order.
std::vector<LabeledExample> flatten_triggers(std::span<const LabeledExample> pool,
                                             std::size_t cap, std::uint64_t rng_seed);

// ceil(2 * class_target / distinct_triggers), at least 1.
std::size_t default_trigger_cap(std::size_t class_target, std::size_t distinct_triggers);

struct FlattenStats {
  std::size_t cap = 0;
  std::size_t triggers = 0;
  std::size_t before = 0;
  std::size_t after = 0;
};

// flatten_triggers applied per sentiment class with the class target from
// `spec`. Without an explicit cap the cap is the larger of
// default_trigger_cap and the smallest cap that still leaves the class
// target. Neutral examples and examples without a trigger pass through.
std::vector<LabeledExample> flatten_to_targets(std::span<const LabeledExample> pool,
                                               const BalanceSpec& spec,
                                               std::optional<std::size_t> cap = std::nullopt,
                                               std::map<Label, FlattenStats>* stats = nullptr);

enum class PlanVariant { additional_only, mixed_general, mixed_full, two_step, three_step };

std::string_view to_string(PlanVariant v);
std::optional<PlanVariant> parse_plan_variant(std::string_view s);

struct Stage {
  std::string name;
  std::string dataset_path;
  bool freeze_before = false;
  std::size_t size = 0;  // examples in the dataset file

  friend bool operator==(const Stage&, const Stage&) = default;
};

struct StagePlan {
  std::string description;
  std::vector<Stage> stages;

  friend bool operator==(const StagePlan&, const StagePlan&) = default;
};

// Dataset files a plan may reference. `mixed` is the concatenation of the
// additional sample and the benchmark training set.
struct PlanPaths {
  std::string additional;
  std::string general;
  std::string thematic;
  std::string benchmark_train;
  std::string mixed;
};

StagePlan make_plan(PlanVariant variant, const PlanPaths& paths);
StagePlan make_plan(std::string_view variant, const PlanPaths& paths);

}  // namespace dsf
