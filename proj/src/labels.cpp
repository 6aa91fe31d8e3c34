#include "dsf/labels.hpp"

namespace dsf {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::positive: return "positive";
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "positive" || s == "pos" || s == "1" || s == "+1") return Label::positive;
  if (s == "negative" || s == "neg" || s == "-1") return Label::negative;
  if (s == "neutral" || s == "neu" || s == "0") return Label::neutral;
  return std::nullopt;
}

std::string_view to_string(Part p) {
  switch (p) {
    case Part::general: return "general";
    case Part::thematic: return "thematic";
    case Part::benchmark: return "benchmark";
  }
  return "benchmark";
}

std::optional<Part> parse_part(std::string_view s) {
  if (s == "general") return Part::general;
  if (s == "thematic") return Part::thematic;
  if (s == "benchmark") return Part::benchmark;
  return std::nullopt;
}

}  // namespace dsf
