#include "mischart/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "mischart/rng.hpp"

namespace mischart {

using nlohmann::json;

int exact_match(const std::set<Misleader>& pred,
                const std::set<Misleader>& gt) {
  if (gt.empty())
    throw std::invalid_argument("exact_match: ground truth is empty");
  return pred == gt ? 1 : 0;
}

int partial_match(const std::set<Misleader>& pred,
                  const std::set<Misleader>& gt) {
  if (gt.empty())
    throw std::invalid_argument("partial_match: ground truth is empty");
  if (pred.empty()) return 0;
  return std::includes(gt.begin(), gt.end(), pred.begin(), pred.end()) ? 1 : 0;
}

MetricsReport evaluate(const std::vector<DatasetRecord>& records,
                       const std::vector<PredictionRecord>& preds) {
  std::map<std::string, const PredictionRecord*> by_id;
  std::vector<std::string> duplicates;
  for (const auto& p : preds)
    if (!by_id.emplace(p.id, &p).second) duplicates.push_back(p.id);
  std::vector<std::string> missing;
  for (const auto& r : records)
    if (by_id.find(r.id) == by_id.end()) missing.push_back(r.id);
  if (!duplicates.empty() || !missing.empty()) {
    std::ostringstream msg;
    msg << "evaluate: ";
    if (!missing.empty()) {
      msg << "missing prediction ids:";
      for (const auto& id : missing) msg << " " << id;
    }
    if (!duplicates.empty()) {
      if (!missing.empty()) msg << "; ";
      msg << "duplicate prediction ids:";
      for (const auto& id : duplicates) msg << " " << id;
    }
    throw std::runtime_error(msg.str());
  }

  MetricsReport m;
  m.n = static_cast<int>(records.size());
  int em_sum = 0, pm_sum = 0;
  for (const auto& r : records) {
    const auto& pred = by_id.at(r.id)->misleaders;
    bool gt_pos = !r.misleaders.empty();
    bool pred_pos = !pred.empty();
    if (gt_pos && pred_pos) ++m.counts.tp;
    if (!gt_pos && pred_pos) ++m.counts.fp;
    if (gt_pos && !pred_pos) ++m.counts.fn;
    if (!gt_pos && !pred_pos) ++m.counts.tn;
    if (gt_pos) {
      ++m.n_misleading;
      em_sum += exact_match(pred, r.misleaders);
      pm_sum += partial_match(pred, r.misleaders);
    }
  }

  auto ratio = [](int a, int b) { return b == 0 ? 0.0 : double(a) / b; };
  m.acc = ratio(m.counts.tp + m.counts.tn, m.n);
  m.pre = ratio(m.counts.tp, m.counts.tp + m.counts.fp);
  m.rec = ratio(m.counts.tp, m.counts.tp + m.counts.fn);
  double f1_pos =
      (m.pre + m.rec) == 0 ? 0.0 : 2 * m.pre * m.rec / (m.pre + m.rec);
  double pre_n = ratio(m.counts.tn, m.counts.tn + m.counts.fn);
  double rec_n = ratio(m.counts.tn, m.counts.tn + m.counts.fp);
  double f1_neg = (pre_n + rec_n) == 0 ? 0.0 : 2 * pre_n * rec_n / (pre_n + rec_n);
  m.f1_macro = (f1_pos + f1_neg) / 2.0;
  m.em = ratio(em_sum, m.n_misleading);
  m.pm = ratio(pm_sum, m.n_misleading);
  return m;
}

std::string stratum_key(const DatasetRecord& r) {
  std::string key(name(r.chart_type));
  key += "|";
  bool first = true;
  for (Misleader m : r.misleaders) {
    if (!first) key += ",";
    key += std::string(name(m));
    first = false;
  }
  return key;
}

std::vector<std::string> stratified_split(
    const std::vector<DatasetRecord>& records, SplitRatios ratios,
    uint64_t seed, std::vector<std::string>* warnings) {
  double sum = ratios.train + ratios.val + ratios.test;
  if (ratios.train <= 0 || ratios.val <= 0 || ratios.test <= 0 ||
      std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must be positive and sum to 1");

  const double r[3] = {ratios.train, ratios.val, ratios.test};
  const char* names[3] = {"train", "val", "test"};

  std::map<std::string, std::vector<size_t>> strata;
  for (size_t i = 0; i < records.size(); ++i)
    strata[stratum_key(records[i])].push_back(i);

  struct Alloc {
    std::vector<size_t> order;
    int count[3] = {0, 0, 0};
    double target[3] = {0, 0, 0};
    bool whole_train = false;
  };
  std::map<std::string, Alloc> allocs;
  double global_target[3] = {0, 0, 0};
  for (size_t b = 0; b < 3; ++b)
    global_target[b] = r[b] * static_cast<double>(records.size());

  for (auto& [key, idx] : strata) {
    Alloc a;
    a.order = idx;
    std::stable_sort(a.order.begin(), a.order.end(), [&](size_t x, size_t y) {
      uint64_t hx = fnv1a64_mix(fnv1a64(records[x].id), seed);
      uint64_t hy = fnv1a64_mix(fnv1a64(records[y].id), seed);
      return hx < hy;
    });
    size_t n = idx.size();
    if (n < 3) {
      a.whole_train = true;
      a.count[0] = static_cast<int>(n);
      if (warnings)
        warnings->push_back("stratum '" + key + "' has only " +
                            std::to_string(n) +
                            " record(s); assigned whole to train");
      allocs[key] = std::move(a);
      continue;
    }
    double rem[3];
    int used = 0;
    for (size_t b = 0; b < 3; ++b) {
      a.target[b] = r[b] * static_cast<double>(n);
      a.count[b] = static_cast<int>(std::floor(a.target[b]));
      rem[b] = a.target[b] - a.count[b];
      used += a.count[b];
    }
    int left = static_cast<int>(n) - used;
    while (left > 0) {
      size_t best = 0;
      for (size_t b = 1; b < 3; ++b)
        if (rem[b] > rem[best] + 1e-12) best = b;
      a.count[best] += 1;
      rem[best] -= 1.0;
      --left;
    }
    allocs[key] = std::move(a);
  }

  // Per-stratum rounding can drift globally; shift single records
  // between buckets wherever the per-stratum error stays within one.
  auto realized = [&](int out[3]) {
    out[0] = out[1] = out[2] = 0;
    for (const auto& [key, a] : allocs)
      for (size_t b = 0; b < 3; ++b) out[b] += a.count[b];
  };
  for (int iter = 0; iter < 4 * static_cast<int>(allocs.size()) + 8; ++iter) {
    int have[3];
    realized(have);
    size_t over = 0, under = 0;
    double max_excess = -1e300, max_deficit = -1e300;
    for (size_t b = 0; b < 3; ++b) {
      double excess = have[b] - global_target[b];
      if (excess > max_excess) {
        max_excess = excess;
        over = b;
      }
      if (-excess > max_deficit) {
        max_deficit = -excess;
        under = b;
      }
    }
    if (max_excess < 1.0 || max_deficit < 1.0) break;
    bool moved = false;
    for (auto& [key, a] : allocs) {
      if (a.whole_train || a.count[over] < 1) continue;
      double e1 = std::fabs((a.count[over] - 1) - a.target[over]);
      double e2 = std::fabs((a.count[under] + 1) - a.target[under]);
      if (e1 <= 1.0 + 1e-9 && e2 <= 1.0 + 1e-9) {
        a.count[over] -= 1;
        a.count[under] += 1;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  std::vector<std::string> out(records.size());
  for (const auto& [key, a] : allocs) {
    size_t at = 0;
    for (size_t b = 0; b < 3; ++b)
      for (int k = 0; k < a.count[b]; ++k) out[a.order[at++]] = names[b];
  }
  return out;
}

namespace {

json misleaders_to_json(const std::set<Misleader>& ms) {
  json arr = json::array();
  for (Misleader m : ms) arr.push_back(std::string(name(m)));
  return arr;
}

std::set<Misleader> misleaders_from_json(const json& arr) {
  std::set<Misleader> out;
  for (const auto& v : arr) {
    auto m = misleader_from_name(v.get<std::string>());
    if (!m)
      throw std::runtime_error("unknown misleader name '" +
                               v.get<std::string>() + "'");
    out.insert(*m);
  }
  return out;
}

}  // namespace

std::string record_to_json(const DatasetRecord& r) {
  json j;
  j["id"] = r.id;
  j["image_path"] = r.image_path;
  j["chart_type"] = std::string(name(r.chart_type));
  j["misleaders"] = misleaders_to_json(r.misleaders);
  j["split"] = r.split;
  j["table_path"] = r.table_path;
  if (r.axis_metadata_path)
    j["axis_metadata_path"] = *r.axis_metadata_path;
  else
    j["axis_metadata_path"] = nullptr;
  j["title"] = r.title;
  j["seed"] = r.seed;
  return j.dump();
}

DatasetRecord record_from_json(const std::string& line) {
  json j = json::parse(line);
  DatasetRecord r;
  r.id = j.at("id").get<std::string>();
  r.image_path = j.at("image_path").get<std::string>();
  auto ct = chart_type_from_name(j.at("chart_type").get<std::string>());
  if (!ct)
    throw std::runtime_error("record " + r.id + ": unknown chart type");
  r.chart_type = *ct;
  r.misleaders = misleaders_from_json(j.at("misleaders"));
  r.split = j.value("split", "");
  r.table_path = j.value("table_path", "");
  if (j.contains("axis_metadata_path") && !j["axis_metadata_path"].is_null())
    r.axis_metadata_path = j["axis_metadata_path"].get<std::string>();
  r.title = j.value("title", "");
  r.seed = j.value("seed", uint64_t{0});
  if (r.misleaders.size() > 3)
    throw std::runtime_error("record " + r.id + ": more than 3 misleaders");
  if (r.chart_type == ChartType::pie && r.axis_metadata_path)
    throw std::runtime_error("record " + r.id + ": pie with axis metadata");
  return r;
}

std::vector<DatasetRecord> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path);
  std::vector<DatasetRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out.push_back(record_from_json(line));
  }
  return out;
}

void save_manifest(const std::string& path,
                   const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  for (const auto& r : records) out << record_to_json(r) << "\n";
}

std::string prediction_to_json(const PredictionRecord& p) {
  json j;
  j["id"] = p.id;
  j["misleaders"] = misleaders_to_json(p.misleaders);
  if (!p.note.empty()) j["note"] = p.note;
  return j.dump();
}

PredictionRecord prediction_from_json(const std::string& line) {
  json j = json::parse(line);
  PredictionRecord p;
  p.id = j.at("id").get<std::string>();
  p.misleaders = misleaders_from_json(j.at("misleaders"));
  p.note = j.value("note", "");
  return p;
}

std::vector<PredictionRecord> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read predictions: " + path);
  std::vector<PredictionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out.push_back(prediction_from_json(line));
  }
  return out;
}

void save_predictions(const std::string& path,
                      const std::vector<PredictionRecord>& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write predictions: " + path);
  for (const auto& p : preds) out << prediction_to_json(p) << "\n";
}

std::string report_to_json(const MetricsReport& m) {
  json j;
  j["acc"] = m.acc;
  j["pre"] = m.pre;
  j["rec"] = m.rec;
  j["f1_macro"] = m.f1_macro;
  j["em"] = m.em;
  j["pm"] = m.pm;
  j["counts"] = {{"tp", m.counts.tp},
                 {"fp", m.counts.fp},
                 {"fn", m.counts.fn},
                 {"tn", m.counts.tn}};
  j["n"] = m.n;
  j["n_misleading"] = m.n_misleading;
  return j.dump(2);
}

}  // namespace mischart
