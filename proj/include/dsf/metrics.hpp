#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "dsf/labels.hpp"

namespace dsf {

// counts[gold][predicted], indexed by Label.
struct ConfusionCounts {
  std::array<std::array<std::uint64_t, 3>, 3> counts{};

  std::uint64_t total() const;
  std::uint64_t& at(Label gold, Label pred) { return counts[index_of(gold)][index_of(pred)]; }
  std::uint64_t at(Label gold, Label pred) const {
    return counts[index_of(gold)][index_of(pred)];
  }
};

struct MetricsReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double f1_pm_macro = 0.0;  // mean F1 of positive and negative
  double f1_pm_micro = 0.0;  // F1 over pooled positive/negative decisions
};

ConfusionCounts confusion(std::span<const Label> gold, std::span<const Label> pred);

// Per-class F1 with 0/0 taken as 0.
double class_f1(const ConfusionCounts& c, Label label);

MetricsReport score(const ConfusionCounts& c);

}  // namespace dsf
