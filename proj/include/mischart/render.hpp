#pragma once

#include <string>
#include <vector>

#include "mischart/chartspec.hpp"

namespace mischart {

struct AxisTickPixels {
  AxisName axis = AxisName::x;
  // Pixel distance of each tick from the axis's first tick, along the
  // axis direction (rightward for x, upward for y). Strictly increasing,
  // first entry 0. Stored at the sub-pixel targets the rasterizer drew.
  std::vector<double> offsets_px;
};

// One scan column per bar for pixel-level audits. fill is the exact
// color of the bar's full rows at that column.
struct BarPixelProbe {
  int column = 0;
  Rgb fill;
};

struct ImageArtifact {
  std::vector<unsigned char> png;
  int width = 0;
  int height = 0;
  std::vector<AxisTickPixels> ticks;
  // Audit geometry; empty for non-bar charts.
  std::vector<std::vector<BarPixelProbe>> bar_probes;  // [series][item]
  int plot_left = 0;
  int plot_top = 0;
  int plot_right = 0;
  int plot_bottom = 0;
  bool three_d = false;
};

// Rasterizes a validated spec. Throws std::runtime_error when
// validate_spec reports problems or the plot region would be degenerate.
ImageArtifact render(const ChartSpec& spec);

// Cap shade used for 3d top faces. Measurement inverts the front-face
// top-row blend against this exact color.
Rgb cap_shade(Rgb fill);

// Recovers sub-pixel bar extents from the raster: count of full rows in
// the exact fill color plus the coverage fraction encoded in the blended
// top row. Decodes art.png internally.
std::vector<double> measure_bar_heights(const ImageArtifact& art,
                                        size_t series = 0);

// Audit sidecar body: one "axis index offset_px" line per tick.
std::string tick_sidecar_text(const ImageArtifact& art);

}  // namespace mischart
