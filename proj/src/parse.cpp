#include "mischart/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>

namespace mischart {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

namespace {

// Month token -> 1..12. Accepts full names, three-letter forms and "sept".
std::optional<int> month_from_name(std::string_view tok) {
  static const std::array<const char*, 12> full = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  std::string t = to_lower(trim(tok));
  if (t.size() > 1 && t.back() == '.') t.pop_back();
  if (t.empty()) return std::nullopt;
  for (int m = 0; m < 12; ++m) {
    std::string_view f = full[static_cast<size_t>(m)];
    if (t == f || (t.size() == 3 && f.substr(0, 3) == t)) return m + 1;
  }
  if (t == "sept") return 9;
  return std::nullopt;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<int> int_field(std::string_view s, int lo, int hi,
                             size_t max_digits) {
  if (!all_digits(s) || s.size() > max_digits) return std::nullopt;
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  if (v < lo || v > hi) return std::nullopt;
  return v;
}

// Plausible calendar years only; keeps ids like "0042" or "20221" out.
std::optional<int> year_field(std::string_view s) {
  if (s.size() != 4) return std::nullopt;
  return int_field(s, 1000, 2999, 4);
}

long long days_since_epoch(int y, int m, int d) {
  using namespace std::chrono;
  return sys_days{year{y} / m / d}.time_since_epoch().count();
}

bool valid_ymd(int y, int m, int d) {
  using namespace std::chrono;
  return (year{y} / m / d).ok();
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::optional<TemporalValue> parse_temporal(std::string_view raw) {
  std::string s = trim(raw);
  if (s.empty()) return std::nullopt;

  if (std::isdigit(static_cast<unsigned char>(s[0]))) {
    char sep = 0;
    if (s.find('-') != std::string::npos)
      sep = '-';
    else if (s.find('/') != std::string::npos)
      sep = '/';
    if (sep == 0) {
      if (auto y = year_field(s)) return TemporalValue{TemporalKind::year, *y};
      return std::nullopt;
    }
    auto f = split_on(s, sep);
    if (f.size() == 2) {
      auto y = year_field(f[0]);
      auto m = int_field(f[1], 1, 12, 2);
      if (y && m)
        return TemporalValue{TemporalKind::year_month,
                             static_cast<long long>(*y) * 12 + (*m - 1)};
      return std::nullopt;
    }
    if (f.size() == 3) {
      auto y = year_field(f[0]);
      auto m = int_field(f[1], 1, 12, 2);
      auto d = int_field(f[2], 1, 31, 2);
      if (y && m && d && valid_ymd(*y, *m, *d))
        return TemporalValue{TemporalKind::date, days_since_epoch(*y, *m, *d)};
      return std::nullopt;
    }
    return std::nullopt;
  }

  // Name-led: "Mar", "March", "Mar 2020".
  size_t sp = s.find(' ');
  if (sp == std::string::npos) {
    if (auto m = month_from_name(s))
      return TemporalValue{TemporalKind::month_name, *m};
    return std::nullopt;
  }
  auto m = month_from_name(s.substr(0, sp));
  auto y = year_field(trim(s.substr(sp + 1)));
  if (m && y)
    return TemporalValue{TemporalKind::year_month,
                         static_cast<long long>(*y) * 12 + (*m - 1)};
  return std::nullopt;
}

bool has_percent_marker(std::string_view raw) {
  std::string s = trim(raw);
  return !s.empty() && s.back() == '%';
}

std::optional<double> parse_numeric(std::string_view raw) {
  std::string s = trim(raw);
  if (s.empty()) return std::nullopt;

  // Leading currency marker (UTF-8 aware for the common ones).
  auto strip_prefix = [&s](std::string_view p) {
    if (s.size() > p.size() && std::string_view(s).substr(0, p.size()) == p)
      s = trim(s.substr(p.size()));
  };
  strip_prefix("$");
  strip_prefix("\xc2\xa3");      // pound
  strip_prefix("\xc2\xa5");      // yen
  strip_prefix("\xe2\x82\xac");  // euro

  if (!s.empty() && s.back() == '%') s = trim(s.substr(0, s.size() - 1));
  if (s.empty()) return std::nullopt;

  // Commas allowed only as thousands separators: 1,234,567.
  if (s.find(',') != std::string::npos) {
    std::string stripped;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) stripped += s[i++];
    size_t lead = 0;
    while (i + lead < s.size() &&
           std::isdigit(static_cast<unsigned char>(s[i + lead])))
      ++lead;
    if (lead == 0 || lead > 3) return std::nullopt;
    stripped.append(s, i, lead);
    i += lead;
    while (i < s.size() && s[i] == ',') {
      if (i + 3 >= s.size() || !all_digits(std::string_view(s).substr(i + 1, 3)))
        return std::nullopt;
      stripped.append(s, i + 1, 3);
      i += 4;
    }
    stripped.append(s, i, std::string::npos);
    if (stripped.find(',') != std::string::npos) return std::nullopt;
    s = stripped;
  }

  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

double LabelRange::width() const {
  if (temporal || integral) return hi - lo + 1.0;
  return hi - lo;
}

namespace {

struct Atom {
  bool temporal;
  bool integral;
  int kind;  // -1 numeric, else TemporalKind; range endpoints must agree
  double value;
};

std::optional<Atom> parse_atom(std::string_view raw) {
  if (auto t = parse_temporal(raw))
    return Atom{true, true, static_cast<int>(t->kind),
                static_cast<double>(t->ordinal)};
  if (auto n = parse_numeric(raw))
    return Atom{false, std::floor(*n) == *n, -1, *n};
  return std::nullopt;
}

std::optional<LabelRange> combine(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return std::nullopt;
  if (b.value < a.value) return std::nullopt;
  return LabelRange{a.temporal, a.integral && b.integral, a.value, b.value};
}

}  // namespace

std::optional<LabelRange> parse_label_range(std::string_view raw) {
  std::string s = trim(raw);
  if (s.empty()) return std::nullopt;

  // Worded / typographic separators first; they are unambiguous.
  for (std::string_view sep :
       {std::string_view(" to "), std::string_view("\xe2\x80\x93"),
        std::string_view("\xe2\x80\x94")}) {
    size_t p = s.find(sep);
    if (p == std::string::npos) continue;
    auto a = parse_atom(trim(std::string_view(s).substr(0, p)));
    auto b = parse_atom(trim(std::string_view(s).substr(p + sep.size())));
    if (a && b)
      if (auto r = combine(*a, *b)) return r;
    return std::nullopt;
  }

  // Whole label as one atom ("2005", "2020-01" the year-month).
  if (auto one = parse_atom(s))
    return LabelRange{one->temporal, one->integral, one->value, one->value};

  // Interior hyphens: try each split point ("1990-1999", "0-9").
  for (size_t p = s.find('-', 1); p != std::string::npos && p + 1 < s.size();
       p = s.find('-', p + 1)) {
    auto a = parse_atom(std::string_view(s).substr(0, p));
    auto b = parse_atom(std::string_view(s).substr(p + 1));
    if (a && b)
      if (auto r = combine(*a, *b)) return r;
  }
  return std::nullopt;
}

}  // namespace mischart
