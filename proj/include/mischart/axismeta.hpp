#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mischart {

// One tick of the 4-column axis table. Axis is "x", "y1" or "y2";
// relative positions are normalized so an axis's first tick sits at 0
// and the gap between its first two ticks is 1.
struct AxisMetadataRow {
  int seq = 0;
  std::string axis;
  std::string label;
  double relative_position = 0.0;
};

struct AxisMetadata {
  std::vector<AxisMetadataRow> rows;

  std::vector<const AxisMetadataRow*> axis_rows(const std::string& axis) const;
};

// Serialized form: {"Seq":[...], "Axis":[...], "Label":[...],
// "Relative position":[...]} with exactly those keys.
std::string to_json(const AxisMetadata& am);
AxisMetadata axis_metadata_from_json(const std::string& text);

// Structural validation: Seq contiguous from 1 in x, y1, y2 block
// order; positions strictly increasing per axis and normalized.
// Returns an error naming the offending row, or nullopt when well formed.
std::optional<std::string> validate_axis_metadata(const AxisMetadata& am);

}  // namespace mischart
