#include "dsf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "dsf/error.hpp"
#include "dsf/random.hpp"

namespace dsf {

namespace {

// Indices of `members` ordered by the seeded id key (ties by id).
void keyed_shuffle(std::span<const LabeledExample> pool, std::vector<std::size_t>& members,
                   std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(members.size());
  for (auto m : members) keyed.emplace_back(keyed_hash(seed, pool[m].id), m);
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return pool[a.second].id < pool[b.second].id;
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) members[i] = keyed[i].second;
}

void require_unique_ids(std::span<const LabeledExample> pool) {
  std::unordered_set<std::string_view> ids;
  ids.reserve(pool.size());
  for (const auto& e : pool) {
    if (!ids.insert(e.id).second) throw DataError("duplicate example id '" + e.id + "'");
  }
}

std::vector<LabeledExample> gather(std::span<const LabeledExample> pool,
                                   std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<LabeledExample> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(pool[i]);
  return out;
}

}  // namespace

std::map<Label, double> benchmark_train_proportions() {
  // Train columns of the five benchmarks, in percent: positive, negative, neutral.
  constexpr double rows[5][3] = {
      {26, 44, 30}, {7, 36, 57}, {19, 34, 47}, {7, 26, 67}, {15, 28, 57}};
  std::map<Label, double> out;
  for (auto l : kLabels) {
    double sum = 0;
    for (const auto& r : rows) sum += r[index_of(l)];
    out[l] = sum / 5.0 / 100.0;
  }
  return out;
}

void BalanceSpec::validate() const {
  if (total < 3) throw ConfigError("balance total must be >= 3");
  if (mode == BalanceMode::distribution) {
    if (proportions.empty()) throw ConfigError("distribution mode needs class proportions");
    double sum = 0;
    for (const auto& [label, f] : proportions) {
      if (f < 0) throw ConfigError("class proportions must be non-negative");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("class proportions must sum to 1");
  }
}

std::array<std::size_t, 3> class_targets(const BalanceSpec& spec) {
  spec.validate();
  std::array<double, 3> fractions{};
  for (auto l : kLabels) {
    if (spec.mode == BalanceMode::uniform) {
      fractions[index_of(l)] = 1.0 / 3.0;
    } else if (auto it = spec.proportions.find(l); it != spec.proportions.end()) {
      fractions[index_of(l)] = it->second;
    }
  }
  std::array<std::size_t, 3> targets{};
  long long assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    targets[i] = static_cast<std::size_t>(std::llround(static_cast<double>(spec.total) * fractions[i]));
    assigned += static_cast<long long>(targets[i]);
  }
  const auto largest = static_cast<std::size_t>(
      std::max_element(fractions.begin(), fractions.end()) - fractions.begin());
  const long long residue = static_cast<long long>(spec.total) - assigned;
  targets[largest] = static_cast<std::size_t>(static_cast<long long>(targets[largest]) + residue);
  return targets;
}

std::vector<LabeledExample> balance(std::span<const LabeledExample> pool,
                                    const BalanceSpec& spec) {
  const auto targets = class_targets(spec);
  require_unique_ids(pool);

  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < pool.size(); ++i) by_class[index_of(pool[i].label)].push_back(i);

  std::vector<std::size_t> chosen;
  for (auto l : kLabels) {
    auto& members = by_class[index_of(l)];
    const auto need = targets[index_of(l)];
    if (members.size() < need) {
      throw DataError("class " + std::string(to_string(l)) + " has " +
                      std::to_string(members.size()) + " examples, " + std::to_string(need) +
                      " required (short by " + std::to_string(need - members.size()) + ")");
    }
    keyed_shuffle(pool, members, spec.rng_seed);
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<long>(need));
  }
  return gather(pool, std::move(chosen));
}

std::vector<LabeledExample> flatten_triggers(std::span<const LabeledExample> pool,
                                             std::size_t cap, std::uint64_t rng_seed) {
  if (cap < 1) throw ConfigError("per-trigger cap must be >= 1");
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].trigger) {
      groups[*pool[i].trigger].push_back(i);
    } else {
      chosen.push_back(i);
    }
  }
  for (auto& [trigger, members] : groups) {
    if (members.size() > cap) {
      keyed_shuffle(pool, members, rng_seed);
      members.resize(cap);
    }
    chosen.insert(chosen.end(), members.begin(), members.end());
  }
  return gather(pool, std::move(chosen));
}

std::size_t default_trigger_cap(std::size_t class_target, std::size_t distinct_triggers) {
  if (distinct_triggers == 0) return std::max<std::size_t>(class_target, 1);
  return std::max<std::size_t>((2 * class_target + distinct_triggers - 1) / distinct_triggers, 1);
}

namespace {

std::size_t filling_cap(const std::map<std::string, std::size_t>& histogram, std::size_t target,
                        std::size_t floor_cap) {
  auto kept = [&](std::size_t cap) {
    std::size_t n = 0;
    for (const auto& [t, c] : histogram) n += std::min(c, cap);
    return n;
  };
  std::size_t max_count = 0;
  for (const auto& [t, c] : histogram) max_count = std::max(max_count, c);
  if (floor_cap >= max_count || kept(floor_cap) >= target) return floor_cap;
  std::size_t lo = floor_cap, hi = max_count;  // kept(lo) < target
  while (hi - lo > 1) {
    const auto mid = lo + (hi - lo) / 2;
    (kept(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::vector<LabeledExample> flatten_to_targets(std::span<const LabeledExample> pool,
                                               const BalanceSpec& spec,
                                               std::optional<std::size_t> cap,
                                               std::map<Label, FlattenStats>* stats) {
  const auto targets = class_targets(spec);
  std::vector<bool> keep(pool.size(), true);
  for (auto label : {Label::positive, Label::negative}) {
    std::vector<std::size_t> where;
    std::map<std::string, std::size_t> histogram;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].label != label || !pool[i].trigger) continue;
      where.push_back(i);
      ++histogram[*pool[i].trigger];
    }
    if (where.empty()) continue;
    const auto target = targets[index_of(label)];
    const auto c = cap ? *cap
                       : filling_cap(histogram, target,
                                     default_trigger_cap(target, histogram.size()));
    std::vector<LabeledExample> members;
    members.reserve(where.size());
    for (auto i : where) members.push_back(pool[i]);
    const auto kept = flatten_triggers(members, c, spec.rng_seed);
    std::unordered_set<std::string_view> kept_ids;
    for (const auto& e : kept) kept_ids.insert(e.id);
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (!kept_ids.count(members[k].id)) keep[where[k]] = false;
    }
    if (stats) (*stats)[label] = {c, histogram.size(), members.size(), kept.size()};
  }
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (keep[i]) out.push_back(pool[i]);
  }
  return out;
}

std::string_view to_string(PlanVariant v) {
  switch (v) {
    case PlanVariant::additional_only: return "additional_only";
    case PlanVariant::mixed_general: return "mixed_general";
    case PlanVariant::mixed_full: return "mixed_full";
    case PlanVariant::two_step: return "two_step";
    case PlanVariant::three_step: return "three_step";
  }
  return "three_step";
}

std::optional<PlanVariant> parse_plan_variant(std::string_view s) {
  for (auto v : {PlanVariant::additional_only, PlanVariant::mixed_general,
                 PlanVariant::mixed_full, PlanVariant::two_step, PlanVariant::three_step}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

namespace {

Stage stage(std::string name, const std::string& path, bool freeze_before) {
  if (path.empty()) throw DataError("missing dataset file for stage '" + name + "'");
  std::ifstream in(path);
  if (!in) throw DataError("missing dataset file for stage '" + name + "': " + path);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++lines;
  }
  if (lines == 0) throw DataError("empty dataset file for stage '" + name + "': " + path);
  return {std::move(name), path, freeze_before, lines};
}

}  // namespace

StagePlan make_plan(PlanVariant variant, const PlanPaths& paths) {
  StagePlan plan;
  switch (variant) {
    case PlanVariant::additional_only:
      plan.description = "Train on the automatically annotated sample only.";
      plan.stages.push_back(stage("additional", paths.additional, false));
      break;
    case PlanVariant::mixed_general:
      plan.description =
          "Train on the general and neutral thematic sample mixed with the benchmark "
          "training set.";
      plan.stages.push_back(stage("mixed", paths.mixed, false));
      break;
    case PlanVariant::mixed_full:
      plan.description =
          "Train on the full annotated sample, including sentiment thematic examples, mixed "
          "with the benchmark training set.";
      plan.stages.push_back(stage("mixed", paths.mixed, false));
      break;
    case PlanVariant::two_step:
      plan.description =
          "Train on the additional sample, freeze, then continue on the benchmark training "
          "set.";
      plan.stages.push_back(stage("additional", paths.additional, false));
      plan.stages.push_back(stage("benchmark_train", paths.benchmark_train, true));
      break;
    case PlanVariant::three_step:
      plan.description =
          "Train on the general part, freeze, continue on the thematic part, freeze, then "
          "train on the benchmark training set.";
      plan.stages.push_back(stage("general", paths.general, false));
      plan.stages.push_back(stage("thematic", paths.thematic, true));
      plan.stages.push_back(stage("benchmark_train", paths.benchmark_train, true));
      break;
  }
  return plan;
}

StagePlan make_plan(std::string_view variant, const PlanPaths& paths) {
  auto v = parse_plan_variant(variant);
  if (!v) throw ConfigError("unknown plan variant '" + std::string(variant) + "'");
  return make_plan(*v, paths);
}

}  // namespace dsf
