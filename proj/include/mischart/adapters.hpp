#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mischart/evalkit.hpp"
#include "mischart/misleaders.hpp"

namespace mischart {

struct PredictorConfig {
  enum class Kind { linter, external };
  Kind kind = Kind::linter;
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string credential_env;  // env var holding the bearer token
  double temperature = 0.0;
  bool synthetic_vocabulary = false;
  int retries = 3;
  int timeout_seconds = 120;
  int jobs = 4;
  std::string audit_path;  // per-record responses logged here if set
  std::string base_dir;    // record paths resolve relative to this
};

std::vector<Misleader> full_vocabulary();       // all 12 names
std::vector<Misleader> synthetic_vocabulary();  // without the one
                                                // never generated

std::string_view misleader_definition(Misleader m);

// Zero-shot prompt: task statement, one definition line per misleader
// in alphabetical order, the up-to-three list instruction, the
// "no misleader" fallback, and the no-explanation instruction.
std::string build_prompt(const std::vector<Misleader>& vocabulary);

// Case-insensitive scan for canonical names; first three by order of
// appearance. Empty text or no recognized name yields the empty set.
std::set<Misleader> parse_response(std::string_view text);

// Linter kind maps lint reports to predictions; external kind posts
// image + prompt per record. Per-record failures become empty
// predictions with a note; an unreachable endpoint aborts the batch.
std::vector<PredictionRecord> predict(const PredictorConfig& config,
                                      const std::vector<DatasetRecord>& records);

}  // namespace mischart
