#include "mischart/table.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mischart/rng.hpp"

namespace mischart {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& what) {
  throw std::runtime_error("table " + name + ": " + what);
}

bool cell_empty(const std::string& s) { return trim(s).empty(); }

// Minimal RFC-4180 reader: quoted fields, "" escapes, CR/LF tolerant.
std::vector<std::vector<std::string>> read_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  if (text.size() >= 3 && text.substr(0, 3) == "\xef\xbb\xbf") i = 3;
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;  // a separator implies a following field
        break;
      case '\r':
        break;
      case '\n':
        if (!row.empty() || !field.empty() || field_started) end_row();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (!row.empty() || !field.empty() || field_started) end_row();
  return rows;
}

}  // namespace

DataTable parse_table_csv(std::string_view text, std::string_view name) {
  DataTable t;
  t.name = std::string(name);
  auto rows = read_csv_rows(text);
  if (rows.size() < 3) fail(t.name, "needs a header row and >= 2 data rows");
  const auto& header = rows[0];
  std::set<std::string> seen;
  for (const auto& h : header) {
    std::string ht = trim(h);
    if (ht.empty()) fail(t.name, "empty header");
    if (!seen.insert(ht).second) fail(t.name, "duplicate header '" + ht + "'");
    t.columns.push_back({ht, {}});
  }
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      fail(t.name, "row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " fields, expected " +
                       std::to_string(header.size()));
    for (size_t c = 0; c < header.size(); ++c)
      t.columns[c].cells.push_back(trim(rows[r][c]));
  }
  return t;
}

DataTable load_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read table file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table_csv(buf.str(), std::filesystem::path(path).stem().string());
}

std::vector<DataTable> load_table_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::runtime_error("not a table directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<DataTable> tables;
  tables.reserve(files.size());
  for (const auto& f : files) tables.push_back(load_table_csv(f.string()));
  return tables;
}

ColumnProfile profile_column(const std::string& header,
                             const std::vector<std::string>& cells) {
  (void)header;
  ColumnProfile p;

  std::vector<TemporalValue> times;
  times.reserve(cells.size());
  bool temporal = !cells.empty();
  for (const auto& c : cells) {
    auto t = parse_temporal(c);
    if (!t || (!times.empty() && t->kind != times[0].kind)) {
      temporal = false;
      break;
    }
    times.push_back(*t);
  }

  if (temporal) {
    p.primary = PrimaryType::temporal;
    p.times = std::move(times);
    if (p.times[0].kind == TemporalKind::date)
      p.secondary.insert(SecondaryType::datetime);
    if (p.times.size() >= 2) {
      long long gap = p.times[1].ordinal - p.times[0].ordinal;
      bool even = gap != 0;
      for (size_t i = 2; i < p.times.size() && even; ++i)
        even = (p.times[i].ordinal - p.times[i - 1].ordinal) == gap;
      if (even) p.secondary.insert(SecondaryType::evenly_spaced_unique_temporal);
    }
  } else {
    std::vector<double> nums;
    nums.reserve(cells.size());
    bool numeric = !cells.empty();
    bool all_marked = true;
    for (const auto& c : cells) {
      auto v = parse_numeric(c);
      if (!v) {
        numeric = false;
        break;
      }
      all_marked = all_marked && has_percent_marker(c);
      nums.push_back(*v);
    }
    if (numeric) {
      p.primary = PrimaryType::numerical;
      p.numbers = std::move(nums);
      double sum = 0;
      bool in_unit = true, in_hundred = true;
      for (double v : p.numbers) {
        sum += v;
        in_unit = in_unit && v >= 0.0 && v <= 1.0;
        in_hundred = in_hundred && v >= 0.0 && v <= 100.0;
      }
      if ((sum >= 0.995 && sum <= 1.005) || (sum >= 99.5 && sum <= 100.5))
        p.secondary.insert(SecondaryType::is_part_of_whole);
      if (all_marked) p.secondary.insert(SecondaryType::numerical_percentage);
      if (in_unit || in_hundred)
        p.secondary.insert(SecondaryType::potential_percentage);
    } else {
      p.primary = PrimaryType::categorical;
    }
  }

  if (p.primary != PrimaryType::numerical) {
    std::set<std::string> distinct(cells.begin(), cells.end());
    if (distinct.size() == cells.size() && !cells.empty())
      p.secondary.insert(SecondaryType::unique_object);
    size_t matched = 0;
    for (const auto& v : distinct)
      if (is_country_name(v)) ++matched;
    if (!distinct.empty() && matched * 10 >= distinct.size() * 9)
      p.secondary.insert(SecondaryType::country);
  }
  return p;
}

std::string humanize_header(std::string_view header) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (size_t i = 0; i < header.size(); ++i) {
    char c = header[i];
    if (c == '_' || c == '-' || c == ' ') {
      flush();
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c)) && !cur.empty() &&
        std::islower(static_cast<unsigned char>(cur.back())))
      flush();
    cur += c;
  }
  flush();
  std::string out;
  for (const auto& tok : tokens) {
    bool all_caps =
        tok.size() > 1 && std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
          return !std::isalpha(c) || std::isupper(c);
        });
    if (!out.empty()) out += ' ';
    out += all_caps ? tok : to_lower(tok);
  }
  return out;
}

namespace {

std::string capitalize(std::string s) {
  if (!s.empty() && std::islower(static_cast<unsigned char>(s[0])))
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::string render_title(const PreparedTable& prepared) {
  std::string values;
  for (size_t i = 0; i < prepared.values.size(); ++i) {
    if (i) values += " and ";
    values += humanize_header(prepared.values[i].header);
  }
  std::string key = humanize_header(prepared.key.header);
  std::string fixed;
  if (!prepared.fixed.empty()) {
    fixed = " (";
    for (size_t i = 0; i < prepared.fixed.size(); ++i) {
      if (i) fixed += ", ";
      fixed += prepared.fixed[i].header + ": " + prepared.fixed[i].value;
    }
    fixed += ")";
  }

  uint64_t h = fnv1a64(prepared.key.header);
  for (const auto& v : prepared.values) h = fnv1a64(v.header, h);
  for (const auto& f : prepared.fixed) h = fnv1a64(f.header + f.value, h);

  // Slot 2 is the "by" template; see the frozen title test before
  // reordering.
  static const char* joiners[4] = {" per ", " for each ", " by ",
                                   " broken down by "};
  std::string joiner = joiners[h % 4];
  return capitalize(values + joiner + key + fixed);
}

namespace {

struct ColumnView {
  size_t index;
  ColumnProfile clean;  // profile over non-empty cells only
};

std::vector<std::string> non_empty(const std::vector<std::string>& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells)
    if (!cell_empty(c)) out.push_back(c);
  return out;
}

}  // namespace

std::vector<PreparedTable> enumerate_prepared_tables(const DataTable& table,
                                                     size_t max_per_table) {
  std::vector<PreparedTable> out;
  if (max_per_table == 0) return out;

  std::vector<ColumnView> keys, vals;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    auto clean = non_empty(table.columns[c].cells);
    if (clean.size() < 3) continue;
    ColumnProfile p = profile_column(table.columns[c].header, clean);
    if (p.primary == PrimaryType::numerical)
      vals.push_back({c, std::move(p)});
    else
      keys.push_back({c, std::move(p)});
  }
  if (vals.empty() || keys.empty()) return out;

  // Value selections: singles first, then pairs, both in column order.
  std::vector<std::vector<size_t>> selections;
  for (const auto& v : vals) selections.push_back({v.index});
  for (size_t a = 0; a < vals.size(); ++a)
    for (size_t b = a + 1; b < vals.size(); ++b)
      selections.push_back({vals[a].index, vals[b].index});

  auto try_emit = [&](size_t key_idx, const std::vector<FixedColumn>& fixed,
                      const std::vector<size_t>& row_pool,
                      const std::vector<size_t>& value_idx) {
    PreparedTable p;
    p.source = table.name;
    std::vector<size_t> rows;
    for (size_t r : row_pool) {
      bool ok = !cell_empty(table.columns[key_idx].cells[r]);
      for (size_t v : value_idx)
        ok = ok && parse_numeric(table.columns[v].cells[r]).has_value();
      if (ok) rows.push_back(r);
    }
    if (rows.size() < 3) return false;

    std::set<std::string> seen;
    for (size_t r : rows)
      if (!seen.insert(table.columns[key_idx].cells[r]).second) return false;

    for (size_t r : rows) p.key_cells.push_back(table.columns[key_idx].cells[r]);
    ColumnProfile kp = profile_column(table.columns[key_idx].header, p.key_cells);
    if (kp.primary == PrimaryType::numerical) return false;
    p.key = {table.columns[key_idx].header, std::move(kp)};
    p.fixed = fixed;
    for (size_t v : value_idx) {
      std::vector<std::string> text;
      for (size_t r : rows) text.push_back(table.columns[v].cells[r]);
      ColumnProfile vp = profile_column(table.columns[v].header, text);
      if (vp.primary != PrimaryType::numerical) return false;
      p.value_cells.push_back(vp.numbers);
      p.values.push_back({table.columns[v].header, std::move(vp)});
      p.value_text.push_back(std::move(text));
    }
    p.title = render_title(p);
    out.push_back(std::move(p));
    return true;
  };

  std::vector<size_t> all_rows(table.rows());
  for (size_t r = 0; r < table.rows(); ++r) all_rows[r] = r;

  for (const auto& k : keys) {
    // Unfixed variant first, then every (other key column = constant).
    for (const auto& sel : selections) {
      if (out.size() >= max_per_table) return out;
      try_emit(k.index, {}, all_rows, sel);
    }
    for (const auto& f : keys) {
      if (f.index == k.index) continue;
      std::vector<std::string> consts;
      {
        std::set<std::string> s;
        for (const auto& c : table.columns[f.index].cells)
          if (!cell_empty(c)) s.insert(c);
        consts.assign(s.begin(), s.end());
      }
      for (const auto& v : consts) {
        std::vector<size_t> pool;
        for (size_t r : all_rows)
          if (table.columns[f.index].cells[r] == v) pool.push_back(r);
        for (const auto& sel : selections) {
          if (out.size() >= max_per_table) return out;
          try_emit(k.index, {{table.columns[f.index].header, v}}, pool, sel);
        }
      }
    }
  }
  return out;
}

std::vector<std::string> validate_prepared(const PreparedTable& p) {
  std::vector<std::string> bad;
  if (p.values.empty()) bad.push_back("no-value-column");
  if (p.rows() < 3) bad.push_back("too-few-rows");
  std::set<std::string> seen(p.key_cells.begin(), p.key_cells.end());
  if (seen.size() != p.key_cells.size()) bad.push_back("duplicate-key");
  if (p.key.profile.primary == PrimaryType::numerical)
    bad.push_back("numerical-key");
  if (p.values.size() != p.value_cells.size() ||
      p.values.size() != p.value_text.size())
    bad.push_back("value-shape-mismatch");
  for (size_t c = 0; c < p.value_cells.size(); ++c) {
    if (p.value_cells[c].size() != p.rows())
      bad.push_back("value-length-mismatch");
    if (c < p.values.size() &&
        p.values[c].profile.primary != PrimaryType::numerical)
      bad.push_back("non-numerical-value");
    for (double v : p.value_cells[c])
      if (!std::isfinite(v)) {
        bad.push_back("non-finite-value");
        break;
      }
  }
  return bad;
}

}  // namespace mischart
