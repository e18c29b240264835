#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mischart {

// Canonical misleader vocabulary. Enum order is the generation order;
// prompt_order() gives the alphabetical-with-digits-last order used when
// listing the vocabulary for a model.
enum class Misleader {
  misrepresentation,
  three_d,
  truncated_axis,
  pie_misuse,
  inconsistent_ticks,
  dual_axis,
  inconsistent_binning,
  discretized_continuous,
  line_misuse,
  item_order,
  inverted_axis,
  axis_range,
};

inline constexpr int kMisleaderCount = 12;

std::string_view name(Misleader m);
std::optional<Misleader> misleader_from_name(std::string_view name);

const std::vector<Misleader>& all_misleaders();
const std::vector<Misleader>& prompt_order();

// Alphabetical with digits after letters, so "3d" sorts last.
bool prompt_less(Misleader a, Misleader b);

// True for the six misleaders the axis linter can detect from tick
// metadata alone.
bool linter_covered(Misleader m);

}  // namespace mischart
