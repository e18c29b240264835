#pragma once

#include <cstdint>

namespace mischart {

enum class ChartType { bar, line, pie };

struct Rgb {
  int r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

enum class ValueLabelMode { none, above };
enum class BarSort { source, alphabetical, value_asc, value_desc };
enum class LineStroke { solid, dashed };

// Seeded cosmetic variation. Every field comes from a finite palette
// and is fully determined by (seed, chart_type); three_d is set by
// misleader injection, never sampled.
struct StyleVariation {
  Rgb background;
  int font_face = 0;  // Hershey face index into the renderer's table
  double font_scale = 0.45;
  int width = 800;
  int height = 600;
  int tick_len = 5;
  bool minor_ticks = false;
  bool value_axis_right = false;
  ValueLabelMode value_labels = ValueLabelMode::none;
  BarSort bar_sort = BarSort::source;
  Rgb series_color;
  Rgb series2_color;
  bool bar_multicolor = false;
  LineStroke line_stroke = LineStroke::solid;
  bool area_fill = false;
  bool line_markers = false;
  bool grid_y = true;
  bool grid_x = false;
  bool pie_legend = false;
  bool border = false;
  int tick_density = 5;  // target tick count on the value axis
  bool three_d = false;
};

StyleVariation sample_style(uint64_t seed, ChartType chart_type);

// Series palette guarantee: every entry keeps at least one channel
// below 120 while backgrounds stay above 235 everywhere, so bar pixels
// are separable from any background or grid pixel.
const Rgb* series_palette(int* count);

}  // namespace mischart
