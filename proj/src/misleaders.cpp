#include "mischart/misleaders.hpp"

#include <algorithm>

#include "mischart/parse.hpp"

namespace mischart {

std::string_view name(Misleader m) {
  switch (m) {
    case Misleader::misrepresentation: return "misrepresentation";
    case Misleader::three_d: return "3d";
    case Misleader::truncated_axis: return "truncated axis";
    case Misleader::pie_misuse: return "inappropriate use of pie chart";
    case Misleader::inconsistent_ticks: return "inconsistent tick intervals";
    case Misleader::dual_axis: return "dual axis";
    case Misleader::inconsistent_binning: return "inconsistent binning size";
    case Misleader::discretized_continuous:
      return "discretized continuous variable";
    case Misleader::line_misuse: return "inappropriate use of line chart";
    case Misleader::item_order: return "inappropriate item order";
    case Misleader::inverted_axis: return "inverted axis";
    case Misleader::axis_range: return "inappropriate axis range";
  }
  return "";
}

std::optional<Misleader> misleader_from_name(std::string_view raw) {
  std::string n = to_lower(trim(raw));
  for (Misleader m : all_misleaders())
    if (n == name(m)) return m;
  return std::nullopt;
}

const std::vector<Misleader>& all_misleaders() {
  static const std::vector<Misleader> all = [] {
    std::vector<Misleader> v;
    for (int i = 0; i < kMisleaderCount; ++i)
      v.push_back(static_cast<Misleader>(i));
    return v;
  }();
  return all;
}

bool prompt_less(Misleader a, Misleader b) {
  // Letters before digits, otherwise plain byte order; "3d" lands last.
  auto key = [](Misleader m) {
    std::string k(name(m));
    if (!k.empty() && k[0] >= '0' && k[0] <= '9') k.insert(0, "\x7f");
    return k;
  };
  return key(a) < key(b);
}

const std::vector<Misleader>& prompt_order() {
  static const std::vector<Misleader> order = [] {
    std::vector<Misleader> v = all_misleaders();
    std::sort(v.begin(), v.end(), prompt_less);
    return v;
  }();
  return order;
}

bool linter_covered(Misleader m) {
  switch (m) {
    case Misleader::truncated_axis:
    case Misleader::inconsistent_ticks:
    case Misleader::dual_axis:
    case Misleader::inconsistent_binning:
    case Misleader::item_order:
    case Misleader::inverted_axis:
      return true;
    default:
      return false;
  }
}

}  // namespace mischart
