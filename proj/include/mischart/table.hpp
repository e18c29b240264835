#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mischart/parse.hpp"

namespace mischart {

struct RawColumn {
  std::string header;
  std::vector<std::string> cells;
};

// A loaded source table. Invariants: every column has the same cell
// count (>= 2), headers are non-empty and unique.
struct DataTable {
  std::string name;
  std::vector<RawColumn> columns;

  size_t rows() const { return columns.empty() ? 0 : columns[0].cells.size(); }
};

enum class PrimaryType { temporal, categorical, numerical };

enum class SecondaryType {
  datetime,
  evenly_spaced_unique_temporal,
  country,
  unique_object,
  is_part_of_whole,
  numerical_percentage,
  potential_percentage,
};

struct ColumnProfile {
  PrimaryType primary = PrimaryType::categorical;
  std::set<SecondaryType> secondary;
  // Parallel to the profiled cells; filled for the matching primary.
  std::vector<double> numbers;
  std::vector<TemporalValue> times;

  bool has(SecondaryType s) const { return secondary.count(s) > 0; }
};

struct PreparedColumn {
  std::string header;
  ColumnProfile profile;
};

struct FixedColumn {
  std::string header;
  std::string value;
};

// One plottable slice of a source table: a single varying key column,
// optional fixed key columns, and 1..2 numeric value columns. Rows are
// aligned: key_cells[i] maps to value_cells[c][i] / value_text[c][i].
struct PreparedTable {
  std::string source;
  PreparedColumn key;
  std::vector<FixedColumn> fixed;
  std::vector<PreparedColumn> values;
  std::vector<std::string> key_cells;
  std::vector<std::vector<double>> value_cells;
  std::vector<std::vector<std::string>> value_text;
  std::string title;

  size_t rows() const { return key_cells.size(); }
};

// Throws std::runtime_error on malformed input or violated invariants.
DataTable load_table_csv(const std::string& path);
DataTable parse_table_csv(std::string_view text, std::string_view name);
// All *.csv under dir, sorted by file name. Unreadable files throw.
std::vector<DataTable> load_table_dir(const std::string& dir);

ColumnProfile profile_column(const std::string& header,
                             const std::vector<std::string>& cells);

std::vector<PreparedTable> enumerate_prepared_tables(const DataTable& table,
                                                     size_t max_per_table = 8);

std::string render_title(const PreparedTable& prepared);

// "WinRatio" -> "win ratio"; used by titles and tests.
std::string humanize_header(std::string_view header);

const std::vector<std::string>& country_names();
bool is_country_name(std::string_view value);

// Re-checks the PreparedTable invariants; returns violation names.
std::vector<std::string> validate_prepared(const PreparedTable& p);

}  // namespace mischart
