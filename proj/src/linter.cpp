#include "mischart/linter.hpp"

#include <algorithm>
#include <cmath>

#include "mischart/parse.hpp"

namespace mischart {

namespace {

const char* kAxisNames[3] = {"x", "y1", "y2"};

std::vector<std::string> axis_labels(const AxisMetadata& am,
                                     const std::string& axis) {
  std::vector<std::string> out;
  for (const auto& r : am.rows)
    if (r.axis == axis) out.push_back(r.label);
  return out;
}

std::vector<double> axis_positions(const AxisMetadata& am,
                                   const std::string& axis) {
  std::vector<double> out;
  for (const auto& r : am.rows)
    if (r.axis == axis) out.push_back(r.relative_position);
  return out;
}

// Temporal first (so year labels get date semantics), numeric second.
// Returns empty unless every label parses under one reading.
enum class AxisValueKind { none, temporal, numeric };

AxisValueKind parse_axis_values(const std::vector<std::string>& labels,
                                std::vector<double>* out) {
  out->clear();
  if (labels.empty()) return AxisValueKind::none;
  std::optional<TemporalKind> kind;
  bool temporal = true;
  for (const auto& l : labels) {
    auto t = parse_temporal(l);
    if (!t || (kind && t->kind != *kind)) {
      temporal = false;
      break;
    }
    kind = t->kind;
    out->push_back(static_cast<double>(t->ordinal));
  }
  if (temporal) return AxisValueKind::temporal;
  out->clear();
  for (const auto& l : labels) {
    auto n = parse_numeric(l);
    if (!n) {
      out->clear();
      return AxisValueKind::none;
    }
    out->push_back(*n);
  }
  return AxisValueKind::numeric;
}

bool strictly_ascending(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) return false;
  return true;
}

bool monotone(const std::vector<double>& v, bool descending) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!descending && v[i] < v[i - 1]) return false;
    if (descending && v[i] > v[i - 1]) return false;
  }
  return true;
}

}  // namespace

bool check_truncated_axis(const AxisMetadata& am) {
  for (const char* axis : {"y1", "y2"}) {
    auto labels = axis_labels(am, axis);
    if (labels.empty()) continue;
    std::vector<double> v;
    v.reserve(labels.size());
    bool numeric = true;
    for (const auto& l : labels) {
      auto n = parse_numeric(l);
      if (!n) {
        numeric = false;
        break;
      }
      v.push_back(*n);
    }
    if (!numeric || !strictly_ascending(v)) continue;
    if (v[0] > 0) return true;
  }
  return false;
}

bool check_inverted_axis(const AxisMetadata& am) {
  for (const char* axis : kAxisNames) {
    auto labels = axis_labels(am, axis);
    if (labels.size() < 2) continue;
    std::vector<double> v;
    if (parse_axis_values(labels, &v) == AxisValueKind::none) continue;
    std::vector<double> asc = v;
    std::sort(asc.begin(), asc.end());
    if (std::adjacent_find(asc.begin(), asc.end()) != asc.end())
      continue;  // ties have no single default order
    std::reverse(asc.begin(), asc.end());
    if (v == asc) return true;
  }
  return false;
}

bool check_dual_axis(const AxisMetadata& am) {
  auto y1 = axis_labels(am, "y1");
  auto y2 = axis_labels(am, "y2");
  return !y1.empty() && !y2.empty() && y1 != y2;
}

bool check_item_order(const AxisMetadata& am) {
  for (const char* axis : kAxisNames) {
    auto labels = axis_labels(am, axis);
    if (labels.size() < 3) continue;
    std::vector<double> v;
    if (parse_axis_values(labels, &v) != AxisValueKind::temporal) continue;
    // Descending is inverted-axis territory, not a shuffle.
    if (!monotone(v, false) && !monotone(v, true)) return true;
  }
  return false;
}

bool check_tick_intervals(const AxisMetadata& am) {
  for (const char* axis : kAxisNames) {
    auto labels = axis_labels(am, axis);
    auto pos = axis_positions(am, axis);
    if (labels.size() < 3) continue;
    std::vector<double> v;
    if (parse_axis_values(labels, &v) == AxisValueKind::none) continue;

    double pmin = 1e300, pmax = 0;
    for (size_t i = 1; i < pos.size(); ++i) {
      double g = pos[i] - pos[i - 1];
      pmin = std::min(pmin, g);
      pmax = std::max(pmax, g);
    }
    if (!(pmin > 0) || pmax / pmin > 1.0 + kLintEpsilon) continue;

    double gmin = 1e300, gmax = 0;
    bool ascending = true;
    for (size_t i = 1; i < v.size(); ++i) {
      double g = v[i] - v[i - 1];
      if (g <= 0) {
        ascending = false;
        break;
      }
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
    }
    if (ascending && gmax / gmin > 1.0 + kLintEpsilon) return true;
  }
  return false;
}

bool check_binning(const AxisMetadata& am) {
  for (const char* axis : kAxisNames) {
    auto labels = axis_labels(am, axis);
    if (labels.size() < 2) continue;
    std::vector<LabelRange> ranges;
    bool all = true;
    for (const auto& l : labels) {
      auto r = parse_label_range(l);
      if (!r || (!ranges.empty() && r->temporal != ranges[0].temporal)) {
        all = false;
        break;
      }
      ranges.push_back(*r);
    }
    if (!all) continue;
    // Singleton-only axes are plain tick grids, not bins.
    bool any_span = std::any_of(ranges.begin(), ranges.end(),
                                [](const LabelRange& r) { return r.is_span(); });
    if (!any_span) continue;
    double w0 = ranges[0].width();
    for (const auto& r : ranges)
      if (std::fabs(r.width() - w0) > 1e-6) return true;
  }
  return false;
}

LintReport lint(const std::optional<AxisMetadata>& am) {
  LintReport report;
  struct Entry {
    Misleader m;
    bool (*check)(const AxisMetadata&);
    const char* evidence;
  };
  static const Entry entries[] = {
      {Misleader::truncated_axis, check_truncated_axis,
       "a vertical axis with ascending numeric labels starts above 0"},
      {Misleader::inverted_axis, check_inverted_axis,
       "an axis runs in exact reverse of its default order"},
      {Misleader::dual_axis, check_dual_axis,
       "y1 and y2 both present with different labels"},
      {Misleader::item_order, check_item_order,
       "a temporal axis is neither ascending nor descending"},
      {Misleader::inconsistent_ticks, check_tick_intervals,
       "uniformly spaced ticks carry non-constant value gaps"},
      {Misleader::inconsistent_binning, check_binning,
       "axis labels are ranges of unequal width"},
  };
  for (const auto& e : entries)
    report.per_check[std::string(name(e.m))] = CheckResult{false, ""};
  if (!am) return report;

  if (auto err = validate_axis_metadata(*am))
    throw std::runtime_error("malformed axis metadata: " + *err);

  for (const auto& e : entries) {
    bool fired = e.check(*am);
    auto& slot = report.per_check[std::string(name(e.m))];
    slot.fired = fired;
    if (fired) {
      slot.evidence = e.evidence;
      report.fired.insert(e.m);
    }
  }
  return report;
}

}  // namespace mischart
