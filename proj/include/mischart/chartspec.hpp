#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mischart/axismeta.hpp"
#include "mischart/misleaders.hpp"
#include "mischart/style.hpp"
#include "mischart/table.hpp"

namespace mischart {

std::string_view name(ChartType t);
std::optional<ChartType> chart_type_from_name(std::string_view n);

enum class AxisName { x, y1, y2 };
std::string_view name(AxisName a);

enum class AxisKind { categorical, temporal, numerical };

struct Tick {
  std::string label;
  double relative_position = 0.0;  // tick units from the axis's first tick
};

struct AxisSpec {
  AxisName axis = AxisName::x;
  AxisKind kind = AxisKind::categorical;
  std::vector<Tick> ticks;
  bool inverted = false;
};

// Value-to-position mapping for a numeric axis: piecewise linear
// through (tick value, tick index) pairs, matching how readers
// interpolate between printed ticks. tick_values run from the axis
// line outward and are strictly monotone (descending when inverted);
// uniform grids reduce to a plain linear map.
struct ValueMap {
  std::vector<double> tick_values;
  double pos(double v) const;  // in tick units from the axis line
  double base() const { return tick_values.empty() ? 0.0 : tick_values[0]; }
};

struct Series {
  std::string label;
  AxisName axis = AxisName::y1;
  std::vector<double> values;  // true values, aligned with item order
};

struct ChartSpec {
  ChartType chart_type = ChartType::bar;
  std::string title;
  std::string key_header;
  AxisKind key_kind = AxisKind::categorical;
  std::vector<std::string> items;  // key labels in display order
  std::vector<Series> series;      // 1..2
  std::vector<AxisSpec> axes;      // x, y1[, y2]; empty for pie
  ValueMap y1_map, y2_map;
  std::optional<Misleader> injected;
  std::vector<std::vector<double>> displayed;     // [series][item], encoded
  std::vector<std::vector<double>> value_labels;  // [series][item], printed
  StyleVariation style;
  uint64_t seed = 0;
  // Source-profile facts injection needs after the table is gone.
  bool value_percent_marked = false;
  std::string unit_suffix;

  const AxisSpec* axis(AxisName a) const;
  const ValueMap& map_for(AxisName a) const {
    return a == AxisName::y2 ? y2_map : y1_map;
  }
};

// Thrown when a misleader cannot be injected; rule names the violated
// applicability condition.
struct InjectError : std::runtime_error {
  explicit InjectError(const std::string& rule)
      : std::runtime_error("inapplicable misleader: " + rule), rule(rule) {}
  std::string rule;
};

std::set<ChartType> compatible_chart_types(const PreparedTable& prepared);

// True for pairs only plottable as a misuse chart: a line over a
// categorical key, or a pie over a non-part-to-whole percentage column.
bool misuse_only_pair(const PreparedTable& prepared, ChartType t);

std::set<Misleader> applicable_misleaders(const PreparedTable& prepared,
                                          ChartType chart_type);

// Data-level feasibility on top of the applicability matrix (for
// example, truncation needs min > 0.25 * max). Inject rejects what this
// rejects; the pipeline uses it to pre-filter candidates.
bool injection_feasible(const PreparedTable& prepared, ChartType chart_type,
                        Misleader m);

ChartSpec build_base_spec(const PreparedTable& prepared, ChartType chart_type,
                          uint64_t seed);

ChartSpec inject_misleader(const ChartSpec& spec, Misleader m, uint64_t seed);

std::optional<AxisMetadata> derive_axis_metadata(const ChartSpec& spec);

std::vector<std::string> validate_spec(const ChartSpec& spec);

// Nice-number ladder: largest of {1, 2, 5} * 10^k not exceeding
// (round: nearest to) x. Heckbert's loose labeling uses these steps.
double nicenum(double x, bool round);

// Compact numeric text for printed value labels: integers bare,
// otherwise up to two decimals with trailing zeros trimmed.
std::string format_value_auto(double v, std::string_view suffix);

}  // namespace mischart
