#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "mischart/axismeta.hpp"
#include "mischart/misleaders.hpp"

namespace mischart {

// Interval-constancy tolerance: printed labels are rounded, so exact
// equality would fire on benign axes. Precision over recall.
inline constexpr double kLintEpsilon = 0.02;

struct CheckResult {
  bool fired = false;
  std::string evidence;
};

struct LintReport {
  std::set<Misleader> fired;
  std::map<std::string, CheckResult> per_check;  // canonical names as keys

  bool misleading() const { return !fired.empty(); }
};

bool check_truncated_axis(const AxisMetadata& am);
bool check_inverted_axis(const AxisMetadata& am);
bool check_dual_axis(const AxisMetadata& am);
bool check_item_order(const AxisMetadata& am);
bool check_tick_intervals(const AxisMetadata& am);
bool check_binning(const AxisMetadata& am);

// Runs all six checks. No metadata (pie charts) yields an empty
// report. Malformed metadata throws with the offending row named.
LintReport lint(const std::optional<AxisMetadata>& am);

}  // namespace mischart
