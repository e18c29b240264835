#include "mischart/adapters.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "mischart/linter.hpp"
#include "mischart/parse.hpp"

namespace mischart {

using nlohmann::json;

std::vector<Misleader> full_vocabulary() { return all_misleaders(); }

std::vector<Misleader> synthetic_vocabulary() {
  std::vector<Misleader> v;
  for (Misleader m : all_misleaders())
    if (m != Misleader::discretized_continuous) v.push_back(m);
  return v;
}

std::string_view misleader_definition(Misleader m) {
  switch (m) {
    case Misleader::misrepresentation:
      return "the sizes of the visual encodings do not match the values "
             "they represent";
    case Misleader::three_d:
      return "the chart uses 3D effects that distort how the data is "
             "perceived";
    case Misleader::truncated_axis:
      return "a value axis does not start from zero, exaggerating "
             "differences";
    case Misleader::pie_misuse:
      return "a pie chart shows data that has no part-to-whole "
             "relationship";
    case Misleader::inconsistent_ticks:
      return "tick marks on an axis are evenly spaced but their values "
             "are not";
    case Misleader::dual_axis:
      return "the chart overlays two independent and parallel numerical "
             "axes";
    case Misleader::inconsistent_binning:
      return "values are grouped into bins of unequal size";
    case Misleader::discretized_continuous:
      return "a continuous variable is split into discrete groups, hiding "
             "its continuity";
    case Misleader::line_misuse:
      return "a line chart connects categories that have no meaningful "
             "order";
    case Misleader::item_order:
      return "items are sorted in an unconventional order";
    case Misleader::inverted_axis:
      return "an axis runs in the direction opposite to conventions";
    case Misleader::axis_range:
      return "the value axis range is too broad or too narrow for the "
             "data shown";
  }
  return "";
}

std::string build_prompt(const std::vector<Misleader>& vocabulary) {
  if (vocabulary.empty())
    throw std::invalid_argument("build_prompt: empty vocabulary");
  std::vector<Misleader> sorted = vocabulary;
  std::sort(sorted.begin(), sorted.end(), prompt_less);

  std::ostringstream out;
  out << "You are an expert in data visualization design. Examine the chart "
         "in the image and decide whether it contains one or more of the "
         "following misleaders:\n";
  for (Misleader m : sorted)
    out << "- " << name(m) << ": " << misleader_definition(m) << ".\n";
  out << "If the visualization includes one or more misleaders, respond with "
         "a comma separated list of up to three misleaders, by alphabetical "
         "order. If the visualization does not include any misleader, "
         "respond with \"no misleader\". Provide only the final answer, "
         "without additional explanation.";
  return out.str();
}

std::set<Misleader> parse_response(std::string_view text) {
  std::string lower = to_lower(text);
  std::vector<std::pair<size_t, Misleader>> hits;
  for (Misleader m : all_misleaders()) {
    size_t at = lower.find(name(m));
    if (at != std::string::npos) hits.push_back({at, m});
  }
  std::sort(hits.begin(), hits.end());
  std::set<Misleader> out;
  for (const auto& [at, m] : hits) {
    out.insert(m);
    if (out.size() == 3) break;
  }
  return out;
}

namespace {

std::string base64_encode(const std::string& in) {
  static const char* tbl =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 2 < in.size()) {
    uint32_t v = (uint8_t(in[i]) << 16) | (uint8_t(in[i + 1]) << 8) |
                 uint8_t(in[i + 2]);
    out += tbl[(v >> 18) & 63];
    out += tbl[(v >> 12) & 63];
    out += tbl[(v >> 6) & 63];
    out += tbl[v & 63];
    i += 3;
  }
  if (i + 1 == in.size()) {
    uint32_t v = uint8_t(in[i]) << 16;
    out += tbl[(v >> 18) & 63];
    out += tbl[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == in.size()) {
    uint32_t v = (uint8_t(in[i]) << 16) | (uint8_t(in[i + 1]) << 8);
    out += tbl[(v >> 18) & 63];
    out += tbl[(v >> 12) & 63];
    out += tbl[(v >> 6) & 63];
    out += "=";
  }
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || path[0] == '/' || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<PredictionRecord> predict_linter(
    const PredictorConfig& config, const std::vector<DatasetRecord>& records) {
  std::vector<PredictionRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    PredictionRecord p;
    p.id = r.id;
    try {
      std::optional<AxisMetadata> am;
      if (r.axis_metadata_path) {
        auto text = read_file(resolve(config.base_dir, *r.axis_metadata_path));
        if (!text)
          throw std::runtime_error("cannot read " + *r.axis_metadata_path);
        am = axis_metadata_from_json(*text);
      }
      p.misleaders = lint(am).fired;
    } catch (const std::exception& e) {
      p.misleaders.clear();
      p.note = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct ExternalOutcome {
  PredictionRecord pred;
  int status = 0;
  std::string content;
  bool unreachable = false;
};

ExternalOutcome call_external(const PredictorConfig& config,
                              const std::string& prompt,
                              const std::string& auth,
                              const DatasetRecord& record) {
  ExternalOutcome o;
  o.pred.id = record.id;

  auto image = read_file(resolve(config.base_dir, record.image_path));
  if (!image) {
    o.pred.note = "cannot read image " + record.image_path;
    return o;
  }

  json content = json::array();
  content.push_back({{"type", "text"}, {"text", prompt}});
  content.push_back(
      {{"type", "image_url"},
       {"image_url",
        {{"url", "data:image/png;base64," + base64_encode(*image)}}}});
  json body;
  body["model"] = config.model;
  body["temperature"] = config.temperature;
  body["messages"] = json::array({{{"role", "user"}, {"content", content}}});
  std::string payload = body.dump();

  httplib::Client cli(config.endpoint);
  cli.set_connection_timeout(10, 0);
  cli.set_read_timeout(config.timeout_seconds, 0);
  httplib::Headers headers;
  if (!auth.empty()) headers.emplace("Authorization", "Bearer " + auth);

  int attempts = std::max(1, config.retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(100 << (attempt - 1)));
    auto res = cli.Post(config.path, headers, payload, "application/json");
    if (!res) {
      o.unreachable = true;
      continue;
    }
    o.unreachable = false;
    o.status = res->status;
    if (res->status >= 500) {
      o.pred.note = "server error " + std::to_string(res->status);
      continue;  // retry 5xx
    }
    if (res->status != 200) {
      o.pred.note = "http status " + std::to_string(res->status);
      return o;
    }
    try {
      json reply = json::parse(res->body);
      o.content =
          reply.at("choices").at(0).at("message").at("content").get<std::string>();
      o.pred.misleaders = parse_response(o.content);
      o.pred.note.clear();
    } catch (const std::exception& e) {
      o.pred.note = std::string("malformed response: ") + e.what();
    }
    return o;
  }
  if (o.unreachable) o.pred.note = "endpoint unreachable";
  return o;
}

std::vector<PredictionRecord> predict_external(
    const PredictorConfig& config, const std::vector<DatasetRecord>& records) {
  std::string prompt = build_prompt(
      config.synthetic_vocabulary ? synthetic_vocabulary() : full_vocabulary());
  std::string auth;
  if (!config.credential_env.empty()) {
    const char* v = std::getenv(config.credential_env.c_str());
    if (v) auth = v;
  }

  std::vector<ExternalOutcome> outcomes(records.size());
  std::atomic<size_t> next{0};
  int jobs = std::clamp(config.jobs, 1, 32);
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < records.size();
           i = next.fetch_add(1))
        outcomes[i] = call_external(config, prompt, auth, records[i]);
    });
  for (auto& t : pool) t.join();

  if (!records.empty() &&
      std::all_of(outcomes.begin(), outcomes.end(),
                  [](const ExternalOutcome& o) { return o.unreachable; }))
    throw std::runtime_error("endpoint unreachable: " + config.endpoint);

  if (!config.audit_path.empty()) {
    std::ofstream audit(config.audit_path, std::ios::binary);
    for (const auto& o : outcomes) {
      json line;
      line["id"] = o.pred.id;
      line["status"] = o.status;
      line["content"] = o.content;
      if (!o.pred.note.empty()) line["note"] = o.pred.note;
      audit << line.dump() << "\n";
    }
  }

  std::vector<PredictionRecord> out;
  out.reserve(outcomes.size());
  for (auto& o : outcomes) out.push_back(std::move(o.pred));
  return out;
}

}  // namespace

std::vector<PredictionRecord> predict(
    const PredictorConfig& config, const std::vector<DatasetRecord>& records) {
  if (config.kind == PredictorConfig::Kind::linter)
    return predict_linter(config, records);
  return predict_external(config, records);
}

}  // namespace mischart
