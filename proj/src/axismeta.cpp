#include "mischart/axismeta.hpp"

#include <cmath>

#include "json.hpp"

namespace mischart {

using nlohmann::json;

std::vector<const AxisMetadataRow*> AxisMetadata::axis_rows(
    const std::string& axis) const {
  std::vector<const AxisMetadataRow*> out;
  for (const auto& r : rows)
    if (r.axis == axis) out.push_back(&r);
  return out;
}

std::string to_json(const AxisMetadata& am) {
  json seq = json::array(), axis = json::array(), label = json::array(),
       pos = json::array();
  for (const auto& r : am.rows) {
    seq.push_back(r.seq);
    axis.push_back(r.axis);
    label.push_back(r.label);
    pos.push_back(r.relative_position);
  }
  json j;
  j["Seq"] = std::move(seq);
  j["Axis"] = std::move(axis);
  j["Label"] = std::move(label);
  j["Relative position"] = std::move(pos);
  return j.dump(2);
}

AxisMetadata axis_metadata_from_json(const std::string& text) {
  json j = json::parse(text);
  for (const char* key : {"Seq", "Axis", "Label", "Relative position"})
    if (!j.contains(key))
      throw std::runtime_error(std::string("axis metadata: missing key '") +
                               key + "'");
  const auto& seq = j["Seq"];
  const auto& axis = j["Axis"];
  const auto& label = j["Label"];
  const auto& pos = j["Relative position"];
  size_t n = seq.size();
  if (axis.size() != n || label.size() != n || pos.size() != n)
    throw std::runtime_error("axis metadata: uneven column lengths");
  AxisMetadata am;
  for (size_t i = 0; i < n; ++i) {
    AxisMetadataRow r;
    r.seq = seq[i].get<int>();
    r.axis = axis[i].get<std::string>();
    if (label[i].is_string())
      r.label = label[i].get<std::string>();
    else
      r.label = label[i].dump();
    r.relative_position = pos[i].get<double>();
    am.rows.push_back(std::move(r));
  }
  return am;
}

std::optional<std::string> validate_axis_metadata(const AxisMetadata& am) {
  auto bad = [](int seq, const std::string& what) {
    return "row " + std::to_string(seq) + ": " + what;
  };
  int expect = 1;
  int axis_stage = 0;  // x=0, y1=1, y2=2; must not go backwards
  const std::string stages[3] = {"x", "y1", "y2"};
  size_t i = 0;
  while (i < am.rows.size()) {
    const std::string& axis = am.rows[i].axis;
    int stage = -1;
    for (int s = 0; s < 3; ++s)
      if (axis == stages[s]) stage = s;
    if (stage < 0) return bad(am.rows[i].seq, "unknown axis '" + axis + "'");
    if (stage < axis_stage)
      return bad(am.rows[i].seq, "axis '" + axis + "' out of x, y1, y2 order");
    axis_stage = stage;
    double first = am.rows[i].relative_position;
    double prev = first;
    size_t start = i;
    for (; i < am.rows.size() && am.rows[i].axis == axis; ++i) {
      if (am.rows[i].seq != expect)
        return bad(am.rows[i].seq,
                   "Seq not contiguous (expected " + std::to_string(expect) + ")");
      ++expect;
      double p = am.rows[i].relative_position;
      if (i > start && p <= prev)
        return bad(am.rows[i].seq, "relative positions not increasing");
      prev = p;
    }
    size_t count = i - start;
    if (count >= 1 && first != 0.0)
      return bad(am.rows[start].seq, "first tick position is not 0");
    if (count >= 2 && am.rows[start + 1].relative_position != 1.0)
      return bad(am.rows[start + 1].seq, "second tick position is not 1");
    ++axis_stage;  // an axis may appear only once
  }
  return std::nullopt;
}

}  // namespace mischart
