#include "mischart/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace mischart {

namespace {

const int kFonts[] = {cv::FONT_HERSHEY_SIMPLEX, cv::FONT_HERSHEY_DUPLEX,
                      cv::FONT_HERSHEY_COMPLEX_SMALL, cv::FONT_HERSHEY_TRIPLEX};

const Rgb kAxisColor{60, 60, 60};
const Rgb kTextColor{35, 35, 35};
const Rgb kGridColor{213, 213, 213};

cv::Scalar bgr(Rgb c) { return {double(c.b), double(c.g), double(c.r)}; }

Rgb darker(Rgb c, double k) {
  return {int(std::lround(c.r * k)), int(std::lround(c.g * k)),
          int(std::lround(c.b * k))};
}

Rgb mix(Rgb a, Rgb b, double t) {
  auto f = [&](int x, int y) { return int(std::lround(x + (y - x) * t)); };
  return {f(a.r, b.r), f(a.g, b.g), f(a.b, b.b)};
}

struct TextStyle {
  int font = cv::FONT_HERSHEY_SIMPLEX;
  double scale = 0.45;
};

cv::Size text_size(const std::string& t, const TextStyle& ts,
                   int* baseline = nullptr) {
  int base = 0;
  cv::Size sz = cv::getTextSize(t, ts.font, ts.scale, 1, &base);
  if (baseline) *baseline = base;
  return sz;
}

void put_text(cv::Mat& img, const std::string& t, int x, int y_base,
              const TextStyle& ts, Rgb color) {
  cv::putText(img, t, {x, y_base}, ts.font, ts.scale, bgr(color), 1,
              cv::LINE_8);
}

void put_text_centered(cv::Mat& img, const std::string& t, int cx, int y_base,
                       const TextStyle& ts, Rgb color) {
  put_text(img, t, cx - text_size(t, ts).width / 2, y_base, ts, color);
}

void put_text_right(cv::Mat& img, const std::string& t, int x_right, int y_base,
                    const TextStyle& ts, Rgb color) {
  put_text(img, t, x_right - text_size(t, ts).width, y_base, ts, color);
}

double fit_scale(const std::string& t, int font, double scale, int max_w) {
  TextStyle ts{font, scale};
  while (ts.scale > 0.3 && text_size(t, ts).width > max_w) ts.scale -= 0.03;
  return ts.scale;
}

void hline(cv::Mat& img, int x0, int x1, int y, Rgb c) {
  cv::line(img, {x0, y}, {x1, y}, bgr(c), 1, cv::LINE_8);
}

void vline(cv::Mat& img, int x, int y0, int y1, Rgb c) {
  cv::line(img, {x, y0}, {x, y1}, bgr(c), 1, cv::LINE_8);
}

void dashed_line(cv::Mat& img, cv::Point a, cv::Point b, Rgb c, int th) {
  double len = std::hypot(double(b.x - a.x), double(b.y - a.y));
  if (len < 1e-6) {
    cv::line(img, a, b, bgr(c), th, cv::LINE_8);
    return;
  }
  double on = 9.0, off = 6.0, t = 0.0;
  while (t < len) {
    double e = std::min(t + on, len);
    cv::Point p{int(std::lround(a.x + (b.x - a.x) * t / len)),
                int(std::lround(a.y + (b.y - a.y) * t / len))};
    cv::Point q{int(std::lround(a.x + (b.x - a.x) * e / len)),
                int(std::lround(a.y + (b.y - a.y) * e / len))};
    cv::line(img, p, q, bgr(c), th, cv::LINE_8);
    t = e + off;
  }
}

struct Frame {
  int left = 0, top = 0, right = 0, bottom = 0;
  int w() const { return right - left; }
  int h() const { return bottom - top; }
};

// Blends the partially covered top row so the sub-pixel bar extent can
// be read back from the raster.
void blend_bar_row(cv::Mat& img, int row, int x0, int x1, Rgb fill,
                   double cover) {
  if (cover <= 1e-7 || row < 0 || row >= img.rows) return;
  for (int x = std::max(0, x0); x <= std::min(img.cols - 1, x1); ++x) {
    auto& p = img.at<cv::Vec3b>(row, x);
    p[0] = uchar(std::lround(p[0] + (fill.b - p[0]) * cover));
    p[1] = uchar(std::lround(p[1] + (fill.g - p[1]) * cover));
    p[2] = uchar(std::lround(p[2] + (fill.r - p[2]) * cover));
  }
}

BarPixelProbe draw_bar(cv::Mat& img, const Frame& fr, double cx, double bw,
                       double h_px, Rgb fill, bool three_d, double gap_px) {
  int x0 = int(std::lround(cx - bw / 2));
  int x1 = int(std::lround(cx + bw / 2)) - 1;
  if (x1 < x0) x1 = x0;
  double yf = fr.bottom - h_px;
  int first_full = int(std::ceil(yf - 1e-7));
  if (first_full < fr.top) first_full = fr.top;
  double cover = first_full - yf;

  if (three_d && h_px >= 0.5) {
    // Oblique extrusion at 30 degrees, depth 15% of the bar width,
    // clamped so the cap stays out of the neighboring bar's columns.
    double depth = 0.15 * bw;
    int lim = std::max(1, int(std::floor(gap_px)) - 1);
    int dxp = std::clamp(int(std::lround(depth * std::cos(CV_PI / 6))), 1, lim);
    int dyp = std::max(1, int(std::lround(depth * std::sin(CV_PI / 6))));
    std::vector<std::vector<cv::Point>> side{
        {{x1, first_full},
         {x1 + dxp, first_full - dyp},
         {x1 + dxp, fr.bottom - 1 - dyp},
         {x1, fr.bottom - 1}}};
    cv::fillPoly(img, side, bgr(darker(fill, 0.72)), cv::LINE_8);
    std::vector<std::vector<cv::Point>> top{{{x0, first_full},
                                             {x1, first_full},
                                             {x1 + dxp, first_full - dyp},
                                             {x0 + dxp, first_full - dyp}}};
    cv::fillPoly(img, top, bgr(cap_shade(fill)), cv::LINE_8);
  }

  if (first_full <= fr.bottom - 1)
    cv::rectangle(img, {x0, first_full}, {x1, fr.bottom - 1}, bgr(fill),
                  cv::FILLED, cv::LINE_8);
  if (first_full - 1 >= fr.top)
    blend_bar_row(img, first_full - 1, x0, x1, fill, cover);
  return {(x0 + x1) / 2, fill};
}

std::string percent_text(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0);
  std::string t(buf);
  if (t.size() > 2 && t.substr(t.size() - 2) == ".0") t.resize(t.size() - 2);
  return t + "%";
}

void render_pie(const ChartSpec& s, cv::Mat& img, const TextStyle& body) {
  const StyleVariation& st = s.style;
  int ncol = 0;
  const Rgb* pal = series_palette(&ncol);

  double sum_disp = 0.0, sum_lab = 0.0;
  for (double v : s.displayed[0]) sum_disp += v;
  for (double v : s.value_labels[0]) sum_lab += v;
  if (sum_disp <= 0) throw std::runtime_error("degenerate pie: zero total");

  int cx = int(st.pie_legend ? st.width * 0.38 : st.width * 0.5);
  int cy = int(st.height * 0.54);
  int R = int(std::min(st.width, st.height) * (st.pie_legend ? 0.34 : 0.30));
  int ry = st.three_d ? int(R * 0.55) : R;
  int depth = st.three_d ? std::max(8, int(std::lround(R * 0.16))) : 0;

  size_t n = s.items.size();
  std::vector<double> a(n + 1);
  a[0] = -90.0;
  for (size_t i = 0; i < n; ++i)
    a[i + 1] = a[i] + 360.0 * s.displayed[0][i] / sum_disp;

  if (st.three_d) {
    // Rim: lower-half arcs stacked downward give the disc its thickness.
    for (int k = depth; k >= 1; --k)
      for (size_t i = 0; i < n; ++i) {
        double lo = std::max(a[i], 0.0), hi = std::min(a[i + 1], 180.0);
        if (lo >= hi) continue;
        cv::ellipse(img, {cx, cy + k}, {R, ry}, 0.0, lo, hi,
                    bgr(darker(pal[i % ncol], 0.7)), 2, cv::LINE_8);
      }
  }
  for (size_t i = 0; i < n; ++i)
    cv::ellipse(img, {cx, cy}, {R, ry}, 0.0, a[i], a[i + 1],
                bgr(pal[i % ncol]), cv::FILLED, cv::LINE_8);

  if (st.pie_legend) {
    int x0 = st.width - std::max(190, st.width / 4);
    int y = 96;
    for (size_t i = 0; i < n; ++i, y += 24) {
      cv::rectangle(img, {x0, y - 11}, {x0 + 13, y + 2},
                    bgr(pal[i % ncol]), cv::FILLED, cv::LINE_8);
      double share = sum_lab > 0 ? s.value_labels[0][i] / sum_lab : 0.0;
      put_text(img, s.items[i] + " (" + percent_text(share) + ")", x0 + 20, y,
               body, kTextColor);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      double mid = (a[i] + a[i + 1]) / 2.0 * CV_PI / 180.0;
      int px = cx + int(std::lround(std::cos(mid) * R * 1.12));
      int py = cy + int(std::lround(std::sin(mid) * ry * 1.12));
      if (st.three_d && std::sin(mid) > 0) py += depth;
      double share = sum_lab > 0 ? s.value_labels[0][i] / sum_lab : 0.0;
      std::string t = s.items[i] + " (" + percent_text(share) + ")";
      if (std::cos(mid) >= 0)
        put_text(img, t, px + 4, py + 4, body, kTextColor);
      else
        put_text_right(img, t, px - 4, py + 4, body, kTextColor);
    }
  }
}

}  // namespace

Rgb cap_shade(Rgb fill) { return mix(fill, {255, 255, 255}, 0.45); }

ImageArtifact render(const ChartSpec& s) {
  {
    auto bad = validate_spec(s);
    if (!bad.empty()) {
      std::string msg = "invalid spec:";
      for (const auto& b : bad) msg += " " + b;
      throw std::runtime_error(msg);
    }
  }
  const StyleVariation& st = s.style;
  cv::Mat img(st.height, st.width, CV_8UC3, bgr(st.background));
  ImageArtifact art;
  art.width = st.width;
  art.height = st.height;
  art.three_d = st.three_d;

  TextStyle body{kFonts[st.font_face % 4], st.font_scale};
  TextStyle title{body.font,
                  fit_scale(s.title, body.font, st.font_scale + 0.12,
                            st.width - 16)};
  put_text_centered(img, s.title, st.width / 2, 32, title, kTextColor);
  if (st.border)
    cv::rectangle(img, {2, 2}, {st.width - 3, st.height - 3}, bgr(kAxisColor),
                  1, cv::LINE_8);

  if (s.chart_type == ChartType::pie) {
    render_pie(s, img, body);
    cv::imencode(".png", img, art.png, {cv::IMWRITE_PNG_COMPRESSION, 3});
    return art;
  }

  bool two = s.series.size() == 2;
  const AxisSpec* xax = s.axis(AxisName::x);
  const AxisSpec* y1 = s.axis(AxisName::y1);
  const AxisSpec* y2 = s.axis(AxisName::y2);
  bool right_axis = y2 != nullptr || st.value_axis_right;

  Frame fr;
  fr.left = 80;
  fr.right = st.width - (right_axis ? 80 : 36);
  fr.top = 58;
  fr.bottom = st.height - (two ? 118 : 92);
  if (fr.w() < 40 || fr.h() < 40)
    throw std::runtime_error("degenerate plot region");
  art.plot_left = fr.left;
  art.plot_top = fr.top;
  art.plot_right = fr.right;
  art.plot_bottom = fr.bottom;

  size_t n = s.items.size();
  size_t k = n > 12 ? (n + 11) / 12 : 1;
  double slot = double(fr.w()) / double(n);
  auto center_x = [&](size_t i) { return fr.left + (double(i) + 0.5) * slot; };
  double utop1 = y1->ticks.back().relative_position;
  double unit1 = fr.h() / utop1;
  double utop2 = y2 ? y2->ticks.back().relative_position : 1.0;
  double unit2 = y2 ? fr.h() / utop2 : 0.0;
  auto row_of = [&](double u, double unit) {
    return int(std::lround(fr.bottom - u * unit));
  };

  if (st.grid_y)
    for (size_t j = 1; j < y1->ticks.size(); ++j)
      hline(img, fr.left + 1, fr.right - 1,
            row_of(y1->ticks[j].relative_position, unit1), kGridColor);
  if (st.grid_x && s.chart_type == ChartType::line)
    for (size_t j = 0; j < xax->ticks.size(); ++j)
      vline(img, int(std::lround(center_x(j * k))), fr.top, fr.bottom - 1,
            kGridColor);

  int ncol = 0;
  const Rgb* pal = series_palette(&ncol);

  if (s.chart_type == ChartType::bar) {
    art.bar_probes.resize(s.series.size());
    for (auto& v : art.bar_probes) v.resize(n);
    double bw = two ? slot * 0.30 : slot * 0.62;
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < s.series.size(); ++c) {
        double cx = center_x(i) + (two ? (c == 0 ? -0.17 : 0.17) * slot : 0.0);
        Rgb fill = c == 1 ? st.series2_color
                          : (st.bar_multicolor ? pal[i % ncol]
                                               : st.series_color);
        double h = s.y1_map.pos(s.displayed[c][i]) * unit1;
        double gap = two ? slot * 0.04 : slot * 0.38;
        art.bar_probes[c][i] =
            draw_bar(img, fr, cx, bw, h, fill, st.three_d, gap);
      }
  } else {
    for (size_t c = 0; c < s.series.size(); ++c) {
      const ValueMap& vm = s.map_for(s.series[c].axis);
      double unit = s.series[c].axis == AxisName::y2 ? unit2 : unit1;
      Rgb color = c == 1 ? st.series2_color : st.series_color;
      std::vector<cv::Point> pts(n);
      for (size_t i = 0; i < n; ++i)
        pts[i] = {int(std::lround(center_x(i))),
                  int(std::lround(fr.bottom - vm.pos(s.displayed[c][i]) *
                                                  unit))};
      if (st.area_fill) {
        std::vector<std::vector<cv::Point>> poly{pts};
        poly[0].push_back({pts.back().x, fr.bottom - 1});
        poly[0].push_back({pts.front().x, fr.bottom - 1});
        cv::fillPoly(img, poly, bgr(mix(color, st.background, 0.75)),
                     cv::LINE_8);
      }
      bool dashed = (st.line_stroke == LineStroke::dashed) != (c == 1);
      for (size_t i = 1; i < n; ++i) {
        if (dashed)
          dashed_line(img, pts[i - 1], pts[i], color, 2);
        else
          cv::line(img, pts[i - 1], pts[i], bgr(color), 2, cv::LINE_8);
      }
      if (st.line_markers)
        for (const auto& p : pts)
          cv::circle(img, p, 3, bgr(color), cv::FILLED, cv::LINE_8);
    }
  }

  // Spines sit on top of the data so bar bottoms stay crisp.
  hline(img, fr.left, fr.right, fr.bottom, kAxisColor);
  bool y1_right = st.value_axis_right && !y2;
  if (!y1_right) vline(img, fr.left, fr.top, fr.bottom, kAxisColor);
  if (y2 || y1_right) vline(img, fr.right, fr.top, fr.bottom, kAxisColor);

  // y ticks and labels.
  auto draw_y_axis = [&](const AxisSpec* ax, double unit, bool on_right) {
    int xs = on_right ? fr.right : fr.left;
    int dir = on_right ? 1 : -1;
    for (size_t j = 0; j < ax->ticks.size(); ++j) {
      int row = row_of(ax->ticks[j].relative_position, unit);
      cv::line(img, {xs, row}, {xs + dir * st.tick_len, row}, bgr(kAxisColor),
               1, cv::LINE_8);
      if (on_right)
        put_text(img, ax->ticks[j].label, xs + st.tick_len + 4, row + 4, body,
                 kTextColor);
      else
        put_text_right(img, ax->ticks[j].label, xs - st.tick_len - 4, row + 4,
                       body, kTextColor);
      if (st.minor_ticks && j + 1 < ax->ticks.size()) {
        double mid = (ax->ticks[j].relative_position +
                      ax->ticks[j + 1].relative_position) /
                     2.0;
        int mrow = row_of(mid, unit);
        cv::line(img, {xs, mrow}, {xs + dir * std::max(2, st.tick_len - 2),
                                   mrow},
                 bgr(kAxisColor), 1, cv::LINE_8);
      }
    }
  };
  draw_y_axis(y1, unit1, y1_right);
  if (y2) draw_y_axis(y2, unit2, true);

  // x ticks and labels, staggered over two rows when crowded.
  double tick_gap = double(k) * slot;
  double max_label_w = 0.0;
  for (const auto& t : xax->ticks)
    max_label_w = std::max(max_label_w,
                           double(text_size(t.label, body).width));
  TextStyle xbody = body;
  if (max_label_w > 1.9 * tick_gap) {
    double worst = 0.0;
    std::string widest;
    for (const auto& t : xax->ticks)
      if (text_size(t.label, body).width > worst) {
        worst = text_size(t.label, body).width;
        widest = t.label;
      }
    xbody.scale = fit_scale(widest, body.font, body.scale,
                            int(1.9 * tick_gap));
    max_label_w = 0.0;
    for (const auto& t : xax->ticks)
      max_label_w = std::max(max_label_w,
                             double(text_size(t.label, xbody).width));
  }
  bool stagger = max_label_w > 0.92 * tick_gap;
  for (size_t j = 0; j < xax->ticks.size(); ++j) {
    int col = int(std::lround(center_x(j * k)));
    cv::line(img, {col, fr.bottom}, {col, fr.bottom + st.tick_len},
             bgr(kAxisColor), 1, cv::LINE_8);
    int row = fr.bottom + st.tick_len + 16 + (stagger && (j % 2) ? 16 : 0);
    put_text_centered(img, xax->ticks[j].label, col, row, xbody, kTextColor);
  }

  // Printed value labels: single-series bars only; grouped labels would
  // collide at readable sizes.
  if (s.chart_type == ChartType::bar && !two &&
      st.value_labels == ValueLabelMode::above) {
    for (size_t i = 0; i < n; ++i) {
      std::string t = format_value_auto(s.value_labels[0][i], s.unit_suffix);
      TextStyle vts{body.font,
                    fit_scale(t, body.font, body.scale, int(slot) - 2)};
      double yf = fr.bottom - s.y1_map.pos(s.displayed[0][i]) * unit1;
      int blend_row = int(std::ceil(yf - 1e-7)) - 1;
      int base_out = 0;
      text_size(t, vts, &base_out);
      int y_base = std::max(12, blend_row - 4 - base_out);
      put_text_centered(img, t, int(std::lround(center_x(i))), y_base, vts,
                        kTextColor);
    }
  }

  if (two) {
    // Legend in the bottom band, clear of the plot and the x labels.
    int base = st.height - 12;
    int w0 = text_size(s.series[0].label, body).width;
    int w1 = text_size(s.series[1].label, body).width;
    int total = 18 + 6 + w0 + 28 + 18 + 6 + w1;
    int x = std::max(4, (st.width - total) / 2);
    auto swatch = [&](int sx, Rgb c, bool dashed) {
      if (s.chart_type == ChartType::bar)
        cv::rectangle(img, {sx, base - 11}, {sx + 13, base - 1}, bgr(c),
                      cv::FILLED, cv::LINE_8);
      else if (dashed)
        dashed_line(img, {sx, base - 5}, {sx + 18, base - 5}, c, 2);
      else
        cv::line(img, {sx, base - 5}, {sx + 18, base - 5}, bgr(c), 2,
                 cv::LINE_8);
    };
    bool d0 = s.chart_type == ChartType::line &&
              st.line_stroke == LineStroke::dashed;
    swatch(x, st.bar_multicolor && s.chart_type == ChartType::bar
                  ? pal[0]
                  : st.series_color,
           d0);
    put_text(img, s.series[0].label, x + 24, base, body, kTextColor);
    int x2 = x + 24 + w0 + 28;
    swatch(x2, st.series2_color, s.chart_type == ChartType::line && !d0);
    put_text(img, s.series[1].label, x2 + 24, base, body, kTextColor);
  }

  // Tick offsets at the sub-pixel targets the rasterizer aimed at.
  AxisTickPixels xt{AxisName::x, {}};
  for (size_t j = 0; j < xax->ticks.size(); ++j)
    xt.offsets_px.push_back(center_x(j * k) - center_x(0));
  art.ticks.push_back(std::move(xt));
  AxisTickPixels y1t{AxisName::y1, {}};
  for (const auto& t : y1->ticks)
    y1t.offsets_px.push_back(t.relative_position * unit1);
  art.ticks.push_back(std::move(y1t));
  if (y2) {
    AxisTickPixels y2t{AxisName::y2, {}};
    for (const auto& t : y2->ticks)
      y2t.offsets_px.push_back(t.relative_position * unit2);
    art.ticks.push_back(std::move(y2t));
  }

  cv::imencode(".png", img, art.png, {cv::IMWRITE_PNG_COMPRESSION, 3});
  return art;
}

std::vector<double> measure_bar_heights(const ImageArtifact& art,
                                        size_t series) {
  if (series >= art.bar_probes.size())
    throw std::invalid_argument("no bar probes for requested series");
  cv::Mat img = cv::imdecode(art.png, cv::IMREAD_COLOR);
  if (img.empty()) throw std::runtime_error("png decode failed");

  std::vector<double> out;
  for (const auto& probe : art.bar_probes[series]) {
    int full = 0;
    int r = art.plot_bottom - 1;
    for (; r >= art.plot_top; --r) {
      const auto& p = img.at<cv::Vec3b>(r, probe.column);
      if (p[2] == probe.fill.r && p[1] == probe.fill.g && p[0] == probe.fill.b)
        ++full;
      else
        break;
    }
    double alpha = 0.0;
    if (r >= art.plot_top) {
      Rgb pre;
      if (art.three_d) {
        pre = cap_shade(probe.fill);
      } else {
        const auto& q = img.at<cv::Vec3b>(r, art.plot_left + 1);
        pre = {q[2], q[1], q[0]};
      }
      const auto& p = img.at<cv::Vec3b>(r, probe.column);
      int dr = pre.r - probe.fill.r;
      int dg = pre.g - probe.fill.g;
      int db = pre.b - probe.fill.b;
      int pick = std::abs(dr) >= std::abs(dg)
                     ? (std::abs(dr) >= std::abs(db) ? 0 : 2)
                     : (std::abs(dg) >= std::abs(db) ? 1 : 2);
      int den = pick == 0 ? dr : pick == 1 ? dg : db;
      int num = pick == 0 ? pre.r - p[2]
                          : pick == 1 ? pre.g - p[1] : pre.b - p[0];
      if (std::abs(den) >= 16)
        alpha = std::clamp(double(num) / double(den), 0.0, 1.0);
    }
    out.push_back(full + alpha);
  }
  return out;
}

std::string tick_sidecar_text(const ImageArtifact& art) {
  std::string out;
  char buf[80];
  for (const auto& ax : art.ticks) {
    std::string axis(name(ax.axis));
    for (size_t i = 0; i < ax.offsets_px.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s %zu %.4f\n", axis.c_str(), i,
                    ax.offsets_px[i]);
      out += buf;
    }
  }
  return out;
}

}  // namespace mischart
