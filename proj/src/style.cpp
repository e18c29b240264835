#include "mischart/style.hpp"

#include <iterator>

#include "mischart/rng.hpp"

namespace mischart {

namespace {

const Rgb kBackgrounds[] = {
    {255, 255, 255}, {250, 250, 245}, {245, 247, 250}, {255, 252, 242},
    {242, 242, 242},
};

const Rgb kSeries[] = {
    {70, 110, 180},   // steel blue
    {180, 60, 50},    // brick red
    {30, 130, 110},   // teal green
    {110, 70, 160},   // violet
    {200, 120, 30},   // amber
    {60, 60, 70},     // slate
};

const int kDims[][2] = {{800, 600}, {880, 660}, {960, 600}, {720, 560}};
const double kFontScales[] = {0.42, 0.48, 0.55};

}  // namespace

const Rgb* series_palette(int* count) {
  *count = static_cast<int>(std::size(kSeries));
  return kSeries;
}

StyleVariation sample_style(uint64_t seed, ChartType chart_type) {
  Rng r(fnv1a64_mix(seed, 0x5337'1eaa));
  StyleVariation s;
  s.background = kBackgrounds[r.below(std::size(kBackgrounds))];
  s.font_face = static_cast<int>(r.below(4));
  s.font_scale = kFontScales[r.below(std::size(kFontScales))];
  const int* dim = kDims[r.below(std::size(kDims))];
  s.width = dim[0];
  s.height = dim[1];
  s.tick_len = 4 + static_cast<int>(r.below(3));
  s.minor_ticks = r.chance(0.3);
  s.border = r.chance(0.35);
  int c1 = static_cast<int>(r.below(std::size(kSeries)));
  s.series_color = kSeries[c1];
  s.series2_color = kSeries[(c1 + 1 + r.below(std::size(kSeries) - 1)) %
                            std::size(kSeries)];
  s.tick_density = 4 + static_cast<int>(r.below(3));

  if (chart_type == ChartType::pie) {
    s.pie_legend = r.chance(0.5);
    return s;
  }

  s.value_axis_right = r.chance(0.25);
  s.grid_y = r.chance(0.75);
  s.grid_x = r.chance(0.25);
  s.value_labels = r.chance(0.4) ? ValueLabelMode::above : ValueLabelMode::none;
  if (chart_type == ChartType::bar) {
    s.bar_multicolor = r.chance(0.3);
    switch (r.below(4)) {
      case 0: s.bar_sort = BarSort::source; break;
      case 1: s.bar_sort = BarSort::alphabetical; break;
      case 2: s.bar_sort = BarSort::value_asc; break;
      default: s.bar_sort = BarSort::value_desc;
    }
  } else {
    s.line_stroke = r.chance(0.25) ? LineStroke::dashed : LineStroke::solid;
    s.area_fill = r.chance(0.3);
    s.line_markers = r.chance(0.5);
  }
  return s;
}

}  // namespace mischart
