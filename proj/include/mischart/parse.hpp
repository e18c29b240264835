#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mischart {

// Temporal grammar accepted throughout the toolkit: 4-digit years,
// year-month ("2020-01", "Jan 2020"), ISO dates ("2020-01-15"), and bare
// English month names. A column/axis is temporal only if every label
// parses under one single granularity.
enum class TemporalKind { year, year_month, date, month_name };

struct TemporalValue {
  TemporalKind kind;
  // year -> y; year_month -> y*12 + (m-1); date -> days since 1970-01-01;
  // month_name -> 1..12. Comparable within one kind only.
  long long ordinal;

  friend bool operator==(const TemporalValue&, const TemporalValue&) = default;
};

std::optional<TemporalValue> parse_temporal(std::string_view text);

// Numeric tick/cell parsing. Strips surrounding whitespace, a leading
// currency symbol ($, €, £, ¥), a trailing percent sign, and thousands
// separators ("1,234,567"). Rejects inf/nan and partial matches.
std::optional<double> parse_numeric(std::string_view text);

bool has_percent_marker(std::string_view text);

// "1990-1999", "1990 – 1999", "2005", "Jan-Mar", "2020-01-06 to 2020-01-20".
// Atoms are either numbers or temporal values; mixed atoms fail. A bare
// atom parses as the degenerate range [a, a].
struct LabelRange {
  bool temporal;
  bool integral;
  double lo, hi;
  // Inclusive span in atom units: (hi - lo) + 1 for integer/temporal
  // atoms ("1990-1999" covers 10 years), (hi - lo) for fractional ones.
  double width() const;
  bool is_span() const { return hi > lo; }
};

std::optional<LabelRange> parse_label_range(std::string_view text);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace mischart
