#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace dsf {

// Sentiment class; also used as lexicon polarity.
enum class Label { positive = 0, negative = 1, neutral = 2 };

inline constexpr std::array<Label, 3> kLabels = {Label::positive, Label::negative,
                                                 Label::neutral};

inline constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

enum class Part { general, thematic, benchmark };

std::string_view to_string(Part p);
std::optional<Part> parse_part(std::string_view s);

}  // namespace dsf
