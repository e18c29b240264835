#include "mischart/chartspec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mischart/linter.hpp"
#include "mischart/rng.hpp"

namespace mischart {

std::string_view name(ChartType t) {
  switch (t) {
    case ChartType::bar: return "bar";
    case ChartType::line: return "line";
    case ChartType::pie: return "pie";
  }
  return "";
}

std::optional<ChartType> chart_type_from_name(std::string_view n) {
  std::string s = to_lower(trim(n));
  if (s == "bar") return ChartType::bar;
  if (s == "line") return ChartType::line;
  if (s == "pie") return ChartType::pie;
  return std::nullopt;
}

std::string_view name(AxisName a) {
  switch (a) {
    case AxisName::x: return "x";
    case AxisName::y1: return "y1";
    case AxisName::y2: return "y2";
  }
  return "";
}

const AxisSpec* ChartSpec::axis(AxisName a) const {
  for (const auto& ax : axes)
    if (ax.axis == a) return &ax;
  return nullptr;
}

double ValueMap::pos(double v) const {
  size_t n = tick_values.size();
  if (n < 2) return 0.0;
  bool asc = tick_values[1] > tick_values[0];
  // Segment search; edge segments extrapolate.
  size_t j = 0;
  for (size_t i = 0; i + 2 < n; ++i) {
    bool past = asc ? v >= tick_values[i + 1] : v <= tick_values[i + 1];
    if (past)
      j = i + 1;
    else
      break;
  }
  double a = tick_values[j], b = tick_values[j + 1];
  return static_cast<double>(j) + (v - a) / (b - a);
}

double nicenum(double x, bool round) {
  int expt = static_cast<int>(std::floor(std::log10(x)));
  double f = x / std::pow(10.0, expt);
  double nf;
  if (round) {
    if (f < 1.5)
      nf = 1;
    else if (f < 3)
      nf = 2;
    else if (f < 7)
      nf = 5;
    else
      nf = 10;
  } else {
    if (f <= 1)
      nf = 1;
    else if (f <= 2)
      nf = 2;
    else if (f <= 5)
      nf = 5;
    else
      nf = 10;
  }
  return nf * std::pow(10.0, expt);
}

namespace {

int step_decimals(double step) {
  if (step >= 1.0 - 1e-12) return 0;
  int d = static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  return std::clamp(d, 0, 6);
}

std::string format_tick(double v, double step, const std::string& suffix) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", step_decimals(step), v);
  return std::string(buf) + suffix;
}

// Ladder from lo upward covering hi; returns tick values lo, lo+s, ...
std::vector<double> ladder(double lo, double hi, double step) {
  std::vector<double> v;
  int m = static_cast<int>(std::ceil((hi - lo) / step - 1e-9));
  m = std::max(m, 1);
  for (int i = 0; i <= m; ++i) v.push_back(lo + step * i);
  return v;
}

AxisSpec make_numeric_axis(AxisName name, const std::vector<double>& values,
                           double step, const std::string& suffix) {
  AxisSpec ax;
  ax.axis = name;
  ax.kind = AxisKind::numerical;
  for (size_t i = 0; i < values.size(); ++i)
    ax.ticks.push_back({format_tick(values[i], step, suffix),
                        static_cast<double>(i)});
  return ax;
}

double series_max(const ChartSpec& s, AxisName axis) {
  double m = 0;
  for (size_t i = 0; i < s.series.size(); ++i)
    if (s.series[i].axis == axis)
      for (double v : s.displayed[i]) m = std::max(m, v);
  return m;
}

double series_min(const ChartSpec& s, AxisName axis) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.series.size(); ++i)
    if (s.series[i].axis == axis)
      for (double v : s.displayed[i]) m = std::min(m, v);
  return m;
}

// x ticks label every item, or every k-th when crowded; positions are
// in first-gap units so sampled grids stay uniform.
void rebuild_x_axis(ChartSpec& s) {
  AxisSpec x;
  x.axis = AxisName::x;
  x.kind = s.key_kind;
  size_t n = s.items.size();
  size_t k = n > 12 ? (n + 11) / 12 : 1;
  for (size_t i = 0; i < n; i += k)
    x.ticks.push_back({s.items[i], static_cast<double>(i / k)});
  for (auto& ax : s.axes)
    if (ax.axis == AxisName::x) {
      bool inv = ax.inverted;
      ax = x;
      ax.inverted = inv;
      return;
    }
  s.axes.insert(s.axes.begin(), x);
}

void rebuild_y1(ChartSpec& s, double lo, double hi) {
  double step = nicenum((hi - lo) / s.style.tick_density, true);
  auto values = ladder(lo, hi, step);
  AxisSpec y = make_numeric_axis(AxisName::y1, values, step, s.unit_suffix);
  s.y1_map.tick_values = values;
  for (auto& ax : s.axes)
    if (ax.axis == AxisName::y1) {
      ax = y;
      return;
    }
  s.axes.push_back(y);
}

double truncation_window_lo(double vmin, double vmax) {
  return std::max(0.0, vmin - 0.3 * (vmax - vmin));
}

// First nice multiple inside [window_lo, vmin] walking the step ladder
// downward; 0 is never an acceptable base.
std::optional<double> find_truncation_base(double vmin, double vmax) {
  if (!(vmin > 0.25 * vmax) || vmin <= 0) return std::nullopt;
  double lo = truncation_window_lo(vmin, vmax);
  int e = static_cast<int>(std::ceil(std::log10(vmin)));
  for (int k = e; k > e - 8; --k) {
    for (double mult : {10.0, 5.0, 2.0}) {
      double step = mult * std::pow(10.0, k - 1);
      double cand = std::floor(vmin / step + 1e-9) * step;
      if (cand > 0 && cand >= lo && cand <= vmin + 1e-9) return cand;
    }
  }
  return std::nullopt;
}

bool part_to_whole_sum(double sum) {
  return (sum >= 0.995 && sum <= 1.005) || (sum >= 99.5 && sum <= 100.5);
}

std::vector<long long> key_ordinals(const ChartSpec& s) {
  std::vector<long long> out;
  for (const auto& it : s.items) {
    auto t = parse_temporal(it);
    if (!t) return {};
    out.push_back(t->ordinal);
  }
  return out;
}

bool evenly_spaced_ascending(const std::vector<long long>& ord) {
  if (ord.size() < 2) return false;
  long long gap = ord[1] - ord[0];
  if (gap <= 0) return false;
  for (size_t i = 2; i < ord.size(); ++i)
    if (ord[i] - ord[i - 1] != gap) return false;
  return true;
}

}  // namespace

std::string format_value_auto(double v, std::string_view suffix) {
  char buf[48];
  double r = std::round(v);
  if (std::fabs(v - r) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.0f", r);
  } else if (std::fabs(v) >= 100) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string t(buf);
    while (t.size() > 1 && t.back() == '0') t.pop_back();
    if (!t.empty() && t.back() == '.') t.pop_back();
    return t + std::string(suffix);
  }
  return std::string(buf) + std::string(suffix);
}

std::set<ChartType> compatible_chart_types(const PreparedTable& prepared) {
  std::set<ChartType> out{ChartType::bar};
  if (prepared.key.profile.primary == PrimaryType::temporal)
    out.insert(ChartType::line);
  if (prepared.values.size() == 1 && prepared.rows() <= 9) {
    const auto& vp = prepared.values[0].profile;
    double sum = std::accumulate(prepared.value_cells[0].begin(),
                                 prepared.value_cells[0].end(), 0.0);
    bool ptw = vp.has(SecondaryType::is_part_of_whole);
    bool misuse_pct = vp.has(SecondaryType::numerical_percentage) &&
                      (sum < 99.0 || sum > 101.0);
    if (ptw || misuse_pct) out.insert(ChartType::pie);
  }
  return out;
}

bool misuse_only_pair(const PreparedTable& prepared, ChartType t) {
  if (t == ChartType::line)
    return prepared.key.profile.primary != PrimaryType::temporal;
  if (t == ChartType::pie) {
    if (prepared.values.size() != 1) return false;
    return !prepared.values[0].profile.has(SecondaryType::is_part_of_whole) &&
           compatible_chart_types(prepared).count(ChartType::pie) > 0;
  }
  return false;
}

std::set<Misleader> applicable_misleaders(const PreparedTable& prepared,
                                          ChartType chart_type) {
  std::set<Misleader> out;
  const auto& kp = prepared.key.profile;
  bool temporal_key = kp.primary == PrimaryType::temporal;
  bool binnable = kp.has(SecondaryType::evenly_spaced_unique_temporal) &&
                  prepared.rows() >= 6;

  switch (chart_type) {
    case ChartType::bar:
      out = {Misleader::misrepresentation, Misleader::three_d,
             Misleader::truncated_axis, Misleader::inconsistent_ticks,
             Misleader::inverted_axis, Misleader::axis_range};
      // The linter's order rule reads temporal axes only; keeping the
      // shuffle on temporal keys preserves the round-trip guarantee.
      if (temporal_key) out.insert(Misleader::item_order);
      if (binnable) out.insert(Misleader::inconsistent_binning);
      break;
    case ChartType::line:
      if (!temporal_key) {
        out = {Misleader::line_misuse};
        break;
      }
      out = {Misleader::truncated_axis, Misleader::inconsistent_ticks,
             Misleader::inverted_axis, Misleader::axis_range,
             Misleader::item_order};
      if (binnable) out.insert(Misleader::inconsistent_binning);
      if (prepared.values.size() >= 2) out.insert(Misleader::dual_axis);
      break;
    case ChartType::pie: {
      bool ptw = !prepared.values.empty() &&
                 prepared.values[0].profile.has(SecondaryType::is_part_of_whole);
      if (ptw)
        out = {Misleader::misrepresentation, Misleader::three_d};
      else
        out = {Misleader::pie_misuse};
      break;
    }
  }
  return out;
}

bool injection_feasible(const PreparedTable& prepared, ChartType chart_type,
                        Misleader m) {
  if (applicable_misleaders(prepared, chart_type).count(m) == 0) return false;
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0;
  for (const auto& col : prepared.value_cells)
    for (double v : col) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  switch (m) {
    case Misleader::truncated_axis:
      return find_truncation_base(vmin, vmax).has_value();
    case Misleader::misrepresentation:
      return vmax > 0 && prepared.rows() <= 12 && prepared.values.size() == 1;
    case Misleader::item_order:
      return prepared.rows() >= 3;
    default:
      return true;
  }
}

ChartSpec build_base_spec(const PreparedTable& prepared, ChartType chart_type,
                          uint64_t seed) {
  bool compatible = compatible_chart_types(prepared).count(chart_type) > 0;
  if (!compatible && !misuse_only_pair(prepared, chart_type))
    throw std::runtime_error("incompatible chart type '" +
                             std::string(name(chart_type)) + "' for table " +
                             prepared.source);
  if (chart_type != ChartType::bar && prepared.values.size() > 2)
    throw std::runtime_error("at most two value columns per chart");

  size_t use_cols = std::min<size_t>(prepared.values.size(), 2);
  double vmax = 0;
  for (size_t c = 0; c < use_cols; ++c)
    for (double v : prepared.value_cells[c]) {
      if (v < 0)
        throw std::runtime_error("negative values unsupported for charts");
      vmax = std::max(vmax, v);
    }
  if (vmax <= 0) throw std::runtime_error("no positive value to plot");

  ChartSpec s;
  s.chart_type = chart_type;
  s.title = prepared.title;
  s.key_header = prepared.key.header;
  s.key_kind = prepared.key.profile.primary == PrimaryType::temporal
                   ? AxisKind::temporal
                   : AxisKind::categorical;
  s.seed = seed;
  s.style = sample_style(seed, chart_type);

  bool all_pct = true;
  for (size_t c = 0; c < use_cols; ++c)
    all_pct = all_pct &&
              prepared.values[c].profile.has(SecondaryType::numerical_percentage);
  s.value_percent_marked = all_pct;
  s.unit_suffix = all_pct ? "%" : "";

  // Display order: temporal keys chronological; categorical bars follow
  // the sampled sort mode; everything else keeps source order.
  size_t n = prepared.rows();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (s.key_kind == AxisKind::temporal) {
    const auto& times = prepared.key.profile.times;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return times[a].ordinal < times[b].ordinal;
    });
  } else if (chart_type == ChartType::bar) {
    switch (s.style.bar_sort) {
      case BarSort::alphabetical:
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          return prepared.key_cells[a] < prepared.key_cells[b];
        });
        break;
      case BarSort::value_asc:
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          return prepared.value_cells[0][a] < prepared.value_cells[0][b];
        });
        break;
      case BarSort::value_desc:
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          return prepared.value_cells[0][a] > prepared.value_cells[0][b];
        });
        break;
      case BarSort::source:
        break;
    }
  }

  for (size_t i : order) s.items.push_back(prepared.key_cells[i]);
  for (size_t c = 0; c < use_cols; ++c) {
    Series ser;
    ser.label = humanize_header(prepared.values[c].header);
    ser.axis = AxisName::y1;
    for (size_t i : order) ser.values.push_back(prepared.value_cells[c][i]);
    s.displayed.push_back(ser.values);
    s.value_labels.push_back(ser.values);
    s.series.push_back(std::move(ser));
  }

  if (chart_type == ChartType::pie) return s;

  rebuild_x_axis(s);
  rebuild_y1(s, 0.0, vmax);
  return s;
}

namespace {

void apply_item_permutation(ChartSpec& s, const std::vector<size_t>& perm) {
  auto permute_str = [&](std::vector<std::string>& v) {
    std::vector<std::string> out(v.size());
    for (size_t i = 0; i < perm.size(); ++i) out[i] = v[perm[i]];
    v = std::move(out);
  };
  auto permute_num = [&](std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < perm.size(); ++i) out[i] = v[perm[i]];
    v = std::move(out);
  };
  permute_str(s.items);
  for (auto& ser : s.series) permute_num(ser.values);
  for (auto& d : s.displayed) permute_num(d);
  for (auto& l : s.value_labels) permute_num(l);
}

bool monotone(const std::vector<long long>& v, bool descending) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!descending && v[i] < v[i - 1]) return false;
    if (descending && v[i] > v[i - 1]) return false;
  }
  return true;
}

std::vector<long long> sampled_tick_ordinals(const ChartSpec& s) {
  std::vector<long long> out;
  const AxisSpec* x = s.axis(AxisName::x);
  if (!x) return out;
  for (const auto& t : x->ticks) {
    auto p = parse_temporal(t.label);
    if (!p) return {};
    out.push_back(p->ordinal);
  }
  return out;
}

ChartSpec inject_truncated(ChartSpec s, Rng&) {
  if (!s.axis(AxisName::y1)) throw InjectError("truncated axis needs a y axis");
  double vmin = series_min(s, AxisName::y1);
  double vmax = series_max(s, AxisName::y1);
  auto lb = find_truncation_base(vmin, vmax);
  if (!lb) throw InjectError("truncated axis requires min > 0.25 * max");
  rebuild_y1(s, *lb, vmax);
  return s;
}

ChartSpec inject_inverted(ChartSpec s, Rng& r) {
  bool x_eligible = s.key_kind == AxisKind::temporal;
  bool flip_x = x_eligible && r.chance(0.5);
  if (flip_x) {
    std::vector<size_t> rev(s.items.size());
    for (size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
    apply_item_permutation(s, rev);
    rebuild_x_axis(s);
    for (auto& ax : s.axes)
      if (ax.axis == AxisName::x) ax.inverted = true;
  } else {
    for (auto& ax : s.axes)
      if (ax.axis == AxisName::y1) {
        std::vector<std::string> labels;
        for (const auto& t : ax.ticks) labels.push_back(t.label);
        std::reverse(labels.begin(), labels.end());
        for (size_t i = 0; i < ax.ticks.size(); ++i)
          ax.ticks[i].label = labels[i];
        ax.inverted = true;
      }
    std::reverse(s.y1_map.tick_values.begin(), s.y1_map.tick_values.end());
  }
  return s;
}

ChartSpec inject_dual(ChartSpec s, Rng&) {
  if (s.chart_type != ChartType::line || s.series.size() != 2)
    throw InjectError("dual axis needs a line chart with two series");
  s.series[1].axis = AxisName::y2;

  double v1max = series_max(s, AxisName::y1);
  double v2max = series_max(s, AxisName::y2);
  rebuild_y1(s, 0.0, v1max);
  double step2 = nicenum(v2max / s.style.tick_density, true);
  int m2 = std::max(1, (int)std::ceil(v2max / step2 - 1e-9));

  // Pick the y2 scale whose curves cross; fall back to the closest.
  auto crossings = [&](double st) {
    const auto& y1v = s.y1_map.tick_values;
    double span1 = y1v.back() - y1v.front();
    double span2 = st * m2;
    int count = 0;
    double prev = 0;
    for (size_t i = 0; i < s.items.size(); ++i) {
      double d = s.displayed[0][i] / span1 - s.displayed[1][i] / span2;
      if (i > 0 && ((prev < 0 && d > 0) || (prev > 0 && d < 0))) ++count;
      prev = d;
    }
    return count;
  };
  double best = step2;
  for (double f : {1.0, 2.0, 0.5, 4.0, 0.25}) {
    if (crossings(step2 * f) > 0) {
      best = step2 * f;
      break;
    }
  }
  auto v2 = ladder(0.0, best * m2, best);
  while (true) {
    AxisSpec y2 = make_numeric_axis(AxisName::y2, v2, best, s.unit_suffix);
    const AxisSpec* y1 = s.axis(AxisName::y1);
    bool same = y1->ticks.size() == y2.ticks.size();
    for (size_t i = 0; same && i < y2.ticks.size(); ++i)
      same = y1->ticks[i].label == y2.ticks[i].label;
    if (!same) {
      s.axes.push_back(y2);
      s.y2_map.tick_values = v2;
      break;
    }
    v2.push_back(v2.back() + best);  // one more tick makes the labels differ
  }
  return s;
}

ChartSpec inject_ticks(ChartSpec s, Rng& r) {
  if (!s.axis(AxisName::y1)) throw InjectError("tick intervals need a y axis");
  double vmax = series_max(s, AxisName::y1);
  double step = 0;
  std::vector<double> grid;
  for (int div : {s.style.tick_density, 6, 8, 10, 12}) {
    step = nicenum(vmax / div, true);
    grid = ladder(0.0, vmax, step);
    if (grid.size() >= 5) break;
  }
  if (grid.size() < 4) throw InjectError("tick grid too small to thin");

  size_t interior = grid.size() - 2;
  size_t max_drop = std::min<size_t>(3, grid.size() - 3);
  std::vector<double> kept;
  for (int attempt = 0; attempt < 64; ++attempt) {
    size_t k = 1 + r.below(max_drop);
    std::vector<size_t> idx(interior);
    std::iota(idx.begin(), idx.end(), 1);
    r.shuffle(idx);
    std::set<size_t> drop(idx.begin(), idx.begin() + k);
    kept.clear();
    for (size_t i = 0; i < grid.size(); ++i)
      if (drop.count(i) == 0) kept.push_back(grid[i]);
    double g0 = kept[1] - kept[0];
    bool constant = true;
    for (size_t i = 2; i < kept.size(); ++i)
      constant = constant && std::fabs(kept[i] - kept[i - 1] - g0) < 1e-9;
    if (!constant) break;
    kept.clear();
  }
  if (kept.empty()) throw InjectError("could not thin ticks unevenly");

  AxisSpec y = make_numeric_axis(AxisName::y1, kept, step, s.unit_suffix);
  for (auto& ax : s.axes)
    if (ax.axis == AxisName::y1) ax = y;
  s.y1_map.tick_values = kept;
  return s;
}

ChartSpec inject_binning(ChartSpec s, Rng& r) {
  auto ord = key_ordinals(s);
  if (ord.empty() || !evenly_spaced_ascending(ord) || ord.size() < 6)
    throw InjectError(
        "binning needs an evenly spaced temporal key with >= 6 rows");
  size_t n = s.items.size();

  std::vector<size_t> widths;
  for (int attempt = 0; attempt < 64 && widths.empty(); ++attempt) {
    std::vector<size_t> w;
    size_t left = n;
    while (left > 0) {
      std::vector<size_t> pool;
      for (size_t c : {1u, 2u, 3u, 5u, 10u}) {
        if (c > left) continue;
        if (left > 30 && c < 5) continue;
        if (left > 12 && c < 3) continue;
        pool.push_back(c);
      }
      if (pool.empty()) pool.push_back(1);
      w.push_back(pool[r.below(pool.size())]);
      left -= w.back();
    }
    std::set<size_t> distinct(w.begin(), w.end());
    if (w.size() >= 3 && distinct.size() >= 2) widths = std::move(w);
  }
  if (widths.empty()) {
    // Deterministic fallback: one double bin, the rest singles.
    widths.assign(n - 2, 1);
    widths.insert(widths.begin(), 2);
  }

  std::vector<std::string> bin_labels;
  std::vector<std::vector<double>> bin_values(s.series.size());
  size_t at = 0;
  for (size_t w : widths) {
    const std::string& first = s.items[at];
    const std::string& last = s.items[at + w - 1];
    if (w == 1) {
      bin_labels.push_back(first);
    } else {
      bool dashed = first.find('-') != std::string::npos ||
                    last.find('-') != std::string::npos;
      bin_labels.push_back(first + (dashed ? " to " : "-") + last);
    }
    for (size_t c = 0; c < s.series.size(); ++c) {
      double sum = 0;
      for (size_t i = 0; i < w; ++i) sum += s.series[c].values[at + i];
      bin_values[c].push_back(sum / static_cast<double>(w));
    }
    at += w;
  }

  s.items = bin_labels;
  double vmax = 0;
  for (size_t c = 0; c < s.series.size(); ++c) {
    s.series[c].values = bin_values[c];
    s.displayed[c] = bin_values[c];
    s.value_labels[c] = bin_values[c];
    for (double v : bin_values[c]) vmax = std::max(vmax, v);
  }
  rebuild_x_axis(s);
  rebuild_y1(s, 0.0, vmax);
  return s;
}

ChartSpec inject_item_order(ChartSpec s, Rng& r) {
  if (s.key_kind != AxisKind::temporal)
    throw InjectError("item order applies to temporal keys");
  size_t n = s.items.size();
  if (n < 3) throw InjectError("item order needs >= 3 items");
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    r.shuffle(perm);
    ChartSpec probe = s;
    apply_item_permutation(probe, perm);
    rebuild_x_axis(probe);
    auto ticks = sampled_tick_ordinals(probe);
    if (ticks.size() >= 3 && !monotone(ticks, false) && !monotone(ticks, true))
      return probe;
  }
  throw InjectError("item order shuffle failed to break monotonicity");
}

ChartSpec inject_range(ChartSpec s, Rng& r) {
  if (!s.axis(AxisName::y1)) throw InjectError("axis range needs a y axis");
  double vmax = series_max(s, AxisName::y1);
  double f = r.uniform(5.0, 10.0);
  rebuild_y1(s, 0.0, f * vmax);
  return s;
}

ChartSpec inject_misrep(ChartSpec s, Rng& r) {
  if (s.chart_type == ChartType::line)
    throw InjectError("misrepresentation applies to bars and pies");
  if (s.series.size() != 1)
    throw InjectError("misrepresentation needs a single value series");
  std::vector<size_t> candidates;
  for (size_t i = 0; i < s.displayed[0].size(); ++i)
    if (s.displayed[0][i] > 0) candidates.push_back(i);
  if (candidates.empty())
    throw InjectError("misrepresentation requires a positive value");

  double top = s.chart_type == ChartType::pie
                   ? std::numeric_limits<double>::infinity()
                   : s.y1_map.tick_values.back();
  r.shuffle(candidates);
  size_t count = candidates.size() >= 2 && r.chance(0.5) ? 2 : 1;
  count = std::min(count, candidates.size());
  for (size_t k = 0; k < count; ++k) {
    size_t i = candidates[k];
    double u = r.uniform(0.25, 0.6);
    double v = s.displayed[0][i];
    bool up = r.chance(0.5);
    if (up && v * (1 + u) > top) up = false;
    s.displayed[0][i] = v * (up ? 1 + u : 1 - u);
  }
  if (s.chart_type == ChartType::bar)
    s.style.value_labels = ValueLabelMode::above;
  return s;
}

}  // namespace

ChartSpec inject_misleader(const ChartSpec& spec, Misleader m, uint64_t seed) {
  if (spec.injected)
    throw InjectError("spec already carries '" +
                      std::string(name(*spec.injected)) + "'");
  Rng r(fnv1a64_mix(fnv1a64_mix(seed, 0x1c4a), static_cast<uint64_t>(m)));
  ChartSpec out = spec;

  switch (m) {
    case Misleader::misrepresentation:
      out = inject_misrep(std::move(out), r);
      break;
    case Misleader::three_d:
      if (spec.chart_type == ChartType::line)
        throw InjectError("3d applies to bars and pies");
      out.style.three_d = true;
      break;
    case Misleader::truncated_axis:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no axes");
      out = inject_truncated(std::move(out), r);
      break;
    case Misleader::pie_misuse: {
      if (spec.chart_type != ChartType::pie)
        throw InjectError("inappropriate pie use needs a pie chart");
      double sum = std::accumulate(spec.displayed[0].begin(),
                                   spec.displayed[0].end(), 0.0);
      if (!spec.value_percent_marked || part_to_whole_sum(sum))
        throw InjectError("data genuinely is part-to-whole");
      break;
    }
    case Misleader::inconsistent_ticks:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no axes");
      out = inject_ticks(std::move(out), r);
      break;
    case Misleader::dual_axis:
      out = inject_dual(std::move(out), r);
      break;
    case Misleader::inconsistent_binning:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no axes");
      out = inject_binning(std::move(out), r);
      break;
    case Misleader::discretized_continuous:
      throw InjectError("discretized continuous variable is not generated");
    case Misleader::line_misuse:
      if (spec.chart_type != ChartType::line ||
          spec.key_kind != AxisKind::categorical)
        throw InjectError(
            "inappropriate line use needs a line over a categorical key");
      break;
    case Misleader::item_order:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no item order axis");
      out = inject_item_order(std::move(out), r);
      break;
    case Misleader::inverted_axis:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no axes");
      out = inject_inverted(std::move(out), r);
      break;
    case Misleader::axis_range:
      if (spec.chart_type == ChartType::pie)
        throw InjectError("pies have no axes");
      out = inject_range(std::move(out), r);
      break;
  }
  out.injected = m;
  return out;
}

std::optional<AxisMetadata> derive_axis_metadata(const ChartSpec& spec) {
  if (spec.chart_type == ChartType::pie) return std::nullopt;
  AxisMetadata am;
  int seq = 1;
  for (AxisName a : {AxisName::x, AxisName::y1, AxisName::y2}) {
    const AxisSpec* ax = spec.axis(a);
    if (!ax) continue;
    for (const auto& t : ax->ticks)
      am.rows.push_back({seq++, std::string(name(a)), t.label,
                         t.relative_position});
  }
  return am;
}

std::vector<std::string> validate_spec(const ChartSpec& spec) {
  std::vector<std::string> bad;
  size_t n = spec.items.size();
  if (spec.series.empty() || spec.series.size() > 2)
    bad.push_back("series-count");
  if (spec.displayed.size() != spec.series.size() ||
      spec.value_labels.size() != spec.series.size())
    bad.push_back("value-shape");
  for (size_t c = 0; c < spec.series.size(); ++c) {
    if (spec.series[c].values.size() != n) bad.push_back("series-length");
    if (c < spec.displayed.size() && spec.displayed[c].size() != n)
      bad.push_back("displayed-length");
    if (c < spec.value_labels.size() && spec.value_labels[c].size() != n)
      bad.push_back("label-length");
  }

  if (spec.chart_type == ChartType::pie) {
    if (!spec.axes.empty()) bad.push_back("pie-with-axes");
    if (spec.series.size() != 1) bad.push_back("pie-series-count");
  } else {
    if (!spec.axis(AxisName::x) || !spec.axis(AxisName::y1))
      bad.push_back("missing-axis");
  }
  for (const auto& ax : spec.axes) {
    if (ax.ticks.empty()) {
      bad.push_back("empty-axis");
      continue;
    }
    if (ax.ticks.size() >= 2 &&
        (ax.ticks[0].relative_position != 0.0 ||
         ax.ticks[1].relative_position != 1.0))
      bad.push_back("unnormalized-axis");
    for (size_t i = 1; i < ax.ticks.size(); ++i)
      if (ax.ticks[i].relative_position <= ax.ticks[i - 1].relative_position)
        bad.push_back("nonincreasing-axis");
  }

  bool dual = spec.axis(AxisName::y2) != nullptr;
  if (dual && (spec.chart_type != ChartType::line || spec.series.size() != 2))
    bad.push_back("dual-shape");
  if (spec.injected == Misleader::dual_axis && !dual)
    bad.push_back("dual-not-realized");

  // Misrepresentation gap: >= 0.25 somewhere when injected, 0 otherwise.
  double gap = 0;
  for (size_t c = 0; c < spec.series.size() && c < spec.displayed.size(); ++c)
    for (size_t i = 0; i < spec.displayed[c].size(); ++i) {
      double t = spec.value_labels[c][i];
      if (t != 0)
        gap = std::max(gap, std::fabs(spec.displayed[c][i] / t - 1.0));
      else if (spec.displayed[c][i] != 0)
        gap = std::max(gap, 1.0);
    }
  if (spec.injected == Misleader::misrepresentation) {
    if (gap < 0.25) bad.push_back("misrepresentation-gap");
  } else if (gap != 0.0) {
    bad.push_back("displayed-drift");
  }

  if (spec.injected == Misleader::truncated_axis) {
    const AxisSpec* y1 = spec.axis(AxisName::y1);
    bool realized = y1 && !spec.y1_map.tick_values.empty() &&
                    spec.y1_map.tick_values[0] > 0;
    if (!realized) bad.push_back("truncation-not-realized");
  }

  // Encoded positions must stay inside the axis span.
  if (spec.chart_type != ChartType::pie) {
    for (size_t c = 0; c < spec.series.size(); ++c) {
      const ValueMap& vm = spec.map_for(spec.series[c].axis);
      double top = static_cast<double>(vm.tick_values.size()) - 1.0;
      for (double v : spec.displayed[c]) {
        double p = vm.pos(v);
        if (p < -1e-9 || p > top + 1e-9) {
          bad.push_back("value-outside-axis");
          break;
        }
      }
    }
  }

  // Round trip against the linter: clean specs fire nothing; covered
  // injections fire exactly their own check.
  auto am = derive_axis_metadata(spec);
  LintReport report = lint(am);
  if (!spec.injected || !linter_covered(*spec.injected)) {
    for (Misleader f : report.fired)
      bad.push_back("lint-fired-on-clean:" + std::string(name(f)));
  } else {
    bool own = false;
    for (Misleader f : report.fired) {
      if (f == *spec.injected)
        own = true;
      else
        bad.push_back("cross-contamination:" + std::string(name(f)));
    }
    if (!own) bad.push_back("lint-missed-injection");
  }
  return bad;
}

}  // namespace mischart
