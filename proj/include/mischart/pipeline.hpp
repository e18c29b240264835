#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mischart/evalkit.hpp"
#include "mischart/misleaders.hpp"

namespace mischart {

struct GenerationConfig {
  std::string tables_dir;
  std::string out_dir;
  uint64_t seed = 1;
  size_t count = 2000;
  double misleading_fraction = 0.78;
  SplitRatios ratios;
  // Sampling weight per misleader; unset means 1.0, <= 0 excludes it.
  std::map<Misleader, double> weights;
  size_t max_per_table = 8;
  int jobs = 0;  // 0 = hardware concurrency
  // Chart-type mix targets; met only as far as the sources permit.
  double bar_share = 0.46;
  double line_share = 0.47;
  double pie_share = 0.07;
};

struct GenerationReport {
  size_t requested = 0;
  size_t emitted = 0;
  size_t misleading = 0;
  bool shortfall = false;
  std::vector<std::string> warnings;
  std::map<std::string, size_t> by_misleader;  // canonical name or "none"
  std::map<std::string, size_t> by_chart;
  std::map<std::string, size_t> by_split;
  std::vector<DatasetRecord> records;  // manifest content, ordered by id
};

// Generates the corpus under config.out_dir: images/, tables/, axis/,
// manifest.jsonl and run-report.txt. Instance seeds depend only on
// (global seed, source, prepared-table index, chart type, misleader), so
// output bytes are independent of worker scheduling.
GenerationReport generate_dataset(const GenerationConfig& config);

std::string run_report_text(const GenerationReport& r);

}  // namespace mischart
