#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mischart/chartspec.hpp"
#include "mischart/misleaders.hpp"

namespace mischart {

struct DatasetRecord {
  std::string id;
  std::string image_path;
  ChartType chart_type = ChartType::bar;
  std::set<Misleader> misleaders;  // empty = non-misleading
  std::string split;               // train | val | test ("" before splitting)
  std::string table_path;
  std::optional<std::string> axis_metadata_path;  // none for pie charts
  std::string title;
  uint64_t seed = 0;
};

struct PredictionRecord {
  std::string id;
  std::set<Misleader> misleaders;  // empty = "no misleader"
  std::string note;                // predictor error note, usually empty
};

struct ConfusionCounts {
  int tp = 0, fp = 0, fn = 0, tn = 0;
};

// Binary metrics treat "misleading" as the positive class; EM and PM
// average over ground-truth-misleading records only.
struct MetricsReport {
  double acc = 0, pre = 0, rec = 0, f1_macro = 0;
  double em = 0, pm = 0;
  ConfusionCounts counts;
  int n = 0;
  int n_misleading = 0;
};

// gt must be non-empty (these scores are defined on misleading records).
int exact_match(const std::set<Misleader>& pred, const std::set<Misleader>& gt);
int partial_match(const std::set<Misleader>& pred,
                  const std::set<Misleader>& gt);

// Throws when any record id is missing from preds or predicted twice,
// listing the offending ids.
MetricsReport evaluate(const std::vector<DatasetRecord>& records,
                       const std::vector<PredictionRecord>& preds);

struct SplitRatios {
  double train = 0.93, val = 0.02, test = 0.05;
};

// Assigns train/val/test per record, stratified by (misleader set x
// chart type). Strata smaller than the bucket count go whole to train
// with a warning. Deterministic in seed.
std::vector<std::string> stratified_split(
    const std::vector<DatasetRecord>& records, SplitRatios ratios,
    uint64_t seed, std::vector<std::string>* warnings = nullptr);

std::string stratum_key(const DatasetRecord& r);

std::string record_to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const std::string& line);
std::vector<DatasetRecord> load_manifest(const std::string& path);
void save_manifest(const std::string& path,
                   const std::vector<DatasetRecord>& records);

std::string prediction_to_json(const PredictionRecord& p);
PredictionRecord prediction_from_json(const std::string& line);
std::vector<PredictionRecord> load_predictions(const std::string& path);
void save_predictions(const std::string& path,
                      const std::vector<PredictionRecord>& preds);

std::string report_to_json(const MetricsReport& m);

}  // namespace mischart
