#include "mischart/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "mischart/chartspec.hpp"
#include "mischart/render.hpp"
#include "mischart/rng.hpp"
#include "mischart/table.hpp"

namespace fs = std::filesystem;

namespace mischart {

namespace {

std::string slug(std::string_view s) {
  std::string out;
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c))
      out += static_cast<char>(std::tolower(c));
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "t" : out;
}

struct PrepEntry {
  PreparedTable prep;
  std::string source_slug;
  size_t prep_idx = 0;       // index within its source table
  std::string table_file;    // relative path once written
};

struct Candidate {
  size_t entry = 0;  // into the PrepEntry vector
  ChartType chart = ChartType::bar;
  std::optional<Misleader> m;
  std::string id;
  double key = 0.0;  // weighted sampling order, lower first
};

struct Built {
  std::string id;
  ChartSpec spec;
  size_t entry = 0;
  std::optional<Misleader> m;
  uint64_t seed = 0;
};

uint64_t instance_seed(uint64_t global, const PrepEntry& pe, ChartType t,
                       const std::optional<Misleader>& m) {
  uint64_t h = fnv1a64_mix(0x9e3779b97f4a7c15ull, global);
  h = fnv1a64(pe.prep.source, h);
  h = fnv1a64_mix(h, pe.prep_idx);
  h = fnv1a64_mix(h, static_cast<uint64_t>(t));
  h = fnv1a64(m ? name(*m) : std::string_view("clean"), h);
  return h;
}

// Weighted sampling without replacement via exponential keys: sorting by
// -log(u)/w draws each candidate with probability proportional to w.
double order_key(uint64_t seed_hash, double w) {
  uint64_t h = fnv1a64_mix(seed_hash, 0x0badc0de);
  double u = static_cast<double>(h >> 11) * 0x1.0p-53 + 0x1.0p-54;
  return -std::log(u) / w;
}

std::string make_id(const PrepEntry& pe, ChartType t,
                    const std::optional<Misleader>& m) {
  std::string out = pe.source_slug + "-p" + std::to_string(pe.prep_idx) + "-" +
                    std::string(name(t)) + "-";
  out += m ? slug(name(*m)) : "clean";
  return out;
}

std::string csv_quote(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string prepared_csv(const PreparedTable& p) {
  std::string out = csv_quote(p.key.header);
  for (const auto& v : p.values) out += "," + csv_quote(v.header);
  out += "\n";
  for (size_t r = 0; r < p.rows(); ++r) {
    out += csv_quote(p.key_cells[r]);
    for (const auto& col : p.value_text) out += "," + csv_quote(col[r]);
    out += "\n";
  }
  return out;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("short write to " + path.string());
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& b) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(b.data()),
          static_cast<std::streamsize>(b.size()));
  if (!f) throw std::runtime_error("short write to " + path.string());
}

std::array<size_t, 3> chart_quotas(const GenerationConfig& cfg, size_t total) {
  std::array<double, 3> share{cfg.bar_share, cfg.line_share, cfg.pie_share};
  double sum = share[0] + share[1] + share[2];
  if (sum <= 0) return {total, 0, 0};
  std::array<size_t, 3> q{};
  std::array<double, 3> frac{};
  size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    double want = total * share[i] / sum;
    q[i] = static_cast<size_t>(std::floor(want));
    frac[i] = want - static_cast<double>(q[i]);
    used += q[i];
  }
  while (used < total) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (frac[i] > frac[best]) best = i;
    ++q[best];
    frac[best] = -1;
    ++used;
  }
  return q;
}

}  // namespace

GenerationReport generate_dataset(const GenerationConfig& cfg) {
  if (cfg.misleading_fraction < 0.0 || cfg.misleading_fraction > 1.0)
    throw std::invalid_argument("misleading fraction must be in [0,1]");
  if (cfg.count == 0) throw std::invalid_argument("count must be positive");

  auto tables = load_table_dir(cfg.tables_dir);
  if (tables.empty())
    throw std::runtime_error("no tables found in " + cfg.tables_dir);

  std::vector<PrepEntry> preps;
  for (const auto& t : tables) {
    auto ps = enumerate_prepared_tables(t, cfg.max_per_table);
    for (size_t i = 0; i < ps.size(); ++i)
      preps.push_back({std::move(ps[i]), slug(t.name), i, ""});
  }
  if (preps.empty())
    throw std::runtime_error("no usable prepared tables in " + cfg.tables_dir);

  GenerationReport rep;
  rep.requested = cfg.count;

  // Candidate pools. A prepared table yields several misleading variants
  // but at most one clean instance per chart type: clean duplicates
  // would be identical images.
  std::vector<Candidate> mis_pool, clean_pool;
  for (size_t e = 0; e < preps.size(); ++e) {
    const auto& pe = preps[e];
    auto compat = compatible_chart_types(pe.prep);
    for (ChartType t : {ChartType::bar, ChartType::line, ChartType::pie}) {
      bool ok = compat.count(t) > 0;
      bool misuse = misuse_only_pair(pe.prep, t);
      if (!ok && !misuse) continue;
      for (Misleader m : applicable_misleaders(pe.prep, t)) {
        if (!injection_feasible(pe.prep, t, m)) continue;
        double w = 1.0;
        if (auto it = cfg.weights.find(m); it != cfg.weights.end())
          w = it->second;
        if (w <= 0.0) continue;
        uint64_t h = instance_seed(cfg.seed, pe, t, m);
        mis_pool.push_back({e, t, m, make_id(pe, t, m), order_key(h, w)});
      }
      if (ok && !misuse) {
        uint64_t h = instance_seed(cfg.seed, pe, t, std::nullopt);
        clean_pool.push_back(
            {e, t, std::nullopt, make_id(pe, t, std::nullopt),
             order_key(h, 1.0)});
      }
    }
  }
  auto by_key = [](const Candidate& a, const Candidate& b) {
    return a.key != b.key ? a.key < b.key : a.id < b.id;
  };
  std::sort(mis_pool.begin(), mis_pool.end(), by_key);
  std::sort(clean_pool.begin(), clean_pool.end(), by_key);

  size_t mis_target =
      static_cast<size_t>(std::llround(cfg.count * cfg.misleading_fraction));
  size_t clean_target = cfg.count - mis_target;

  size_t failures = 0;
  auto try_build = [&](const Candidate& c, Built* out) {
    const PrepEntry& pe = preps[c.entry];
    uint64_t s = instance_seed(cfg.seed, pe, c.chart, c.m);
    try {
      ChartSpec spec = build_base_spec(pe.prep, c.chart, s);
      if (c.m) spec = inject_misleader(spec, *c.m, s);
      auto bad = validate_spec(spec);
      if (!bad.empty()) {
        std::string msg = "validate " + c.id + ":";
        for (const auto& b : bad) msg += " " + b;
        throw std::runtime_error(msg);
      }
      *out = {c.id, std::move(spec), c.entry, c.m, s};
      return true;
    } catch (const std::exception& ex) {
      ++failures;
      if (rep.warnings.size() < 40)
        rep.warnings.push_back("skipped " + c.id + ": " + ex.what());
      return false;
    }
  };

  // Two passes per pool: chart-type quotas first, then backfill from
  // whatever remains so scarce pie sources do not sink the total count.
  auto select = [&](std::vector<Candidate>& pool, size_t target) {
    std::vector<Built> out;
    auto quota = chart_quotas(cfg, target);
    std::array<size_t, 3> got{};
    std::vector<char> used(pool.size(), 0);
    for (size_t i = 0; i < pool.size() && out.size() < target; ++i) {
      size_t ci = static_cast<size_t>(pool[i].chart);
      if (got[ci] >= quota[ci]) continue;
      used[i] = 1;
      Built b;
      if (try_build(pool[i], &b)) {
        ++got[ci];
        out.push_back(std::move(b));
      }
    }
    for (size_t i = 0; i < pool.size() && out.size() < target; ++i) {
      if (used[i]) continue;
      Built b;
      if (try_build(pool[i], &b)) out.push_back(std::move(b));
    }
    return out;
  };

  std::vector<Built> built = select(mis_pool, mis_target);
  rep.misleading = built.size();
  {
    auto clean = select(clean_pool, clean_target);
    for (auto& b : clean) built.push_back(std::move(b));
  }
  rep.emitted = built.size();
  rep.shortfall = rep.emitted < rep.requested;
  if (rep.shortfall)
    rep.warnings.push_back(
        "shortfall: emitted " + std::to_string(rep.emitted) + " of " +
        std::to_string(rep.requested) + " requested (" +
        std::to_string(failures) + " candidate failures)");

  std::sort(built.begin(), built.end(),
            [](const Built& a, const Built& b) { return a.id < b.id; });

  fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "tables");
  fs::create_directories(out_dir / "axis");

  // Prepared tables are shared across their instances; write each once.
  std::set<size_t> used_entries;
  for (const auto& b : built) used_entries.insert(b.entry);
  for (size_t e : used_entries) {
    PrepEntry& pe = preps[e];
    pe.table_file = "tables/" + pe.source_slug + "-p" +
                    std::to_string(pe.prep_idx) + ".csv";
    write_file(out_dir / pe.table_file, prepared_csv(pe.prep));
  }

  unsigned hw = std::thread::hardware_concurrency();
  size_t jobs = cfg.jobs > 0 ? static_cast<size_t>(cfg.jobs)
                             : (hw > 0 ? hw : 1);
  jobs = std::clamp<size_t>(jobs, 1, 16);
  std::vector<std::string> render_errors(built.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= built.size()) return;
      const Built& b = built[i];
      try {
        ImageArtifact art = render(b.spec);
        write_bytes(out_dir / "images" / (b.id + ".png"), art.png);
        write_file(out_dir / "images" / (b.id + ".ticks.txt"),
                   tick_sidecar_text(art));
        if (auto am = derive_axis_metadata(b.spec))
          write_file(out_dir / "axis" / (b.id + ".json"), to_json(*am));
      } catch (const std::exception& ex) {
        render_errors[i] = ex.what();
      }
    }
  };
  {
    std::vector<std::thread> threads;
    for (size_t j = 1; j < jobs; ++j) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
  }

  for (size_t i = 0; i < built.size(); ++i) {
    const Built& b = built[i];
    if (!render_errors[i].empty()) {
      rep.warnings.push_back("render failed " + b.id + ": " +
                             render_errors[i]);
      rep.shortfall = true;
      --rep.emitted;
      if (b.m) --rep.misleading;
      continue;
    }
    DatasetRecord r;
    r.id = b.id;
    r.image_path = "images/" + b.id + ".png";
    r.chart_type = b.spec.chart_type;
    if (b.m) r.misleaders = {*b.m};
    r.table_path = preps[b.entry].table_file;
    if (b.spec.chart_type != ChartType::pie)
      r.axis_metadata_path = "axis/" + b.id + ".json";
    r.title = b.spec.title;
    r.seed = b.seed;
    rep.records.push_back(std::move(r));
  }

  auto splits = stratified_split(rep.records, cfg.ratios, cfg.seed,
                                 &rep.warnings);
  for (size_t i = 0; i < rep.records.size(); ++i)
    rep.records[i].split = splits[i];

  for (const auto& r : rep.records) {
    ++rep.by_chart[std::string(name(r.chart_type))];
    ++rep.by_split[r.split];
    if (r.misleaders.empty())
      ++rep.by_misleader["none"];
    else
      for (Misleader m : r.misleaders) ++rep.by_misleader[std::string(name(m))];
  }

  save_manifest((out_dir / "manifest.jsonl").string(), rep.records);
  write_file(out_dir / "run-report.txt", run_report_text(rep));
  return rep;
}

std::string run_report_text(const GenerationReport& r) {
  std::string out;
  out += "requested " + std::to_string(r.requested) + "\n";
  out += "emitted " + std::to_string(r.emitted) + "\n";
  char frac[32];
  std::snprintf(frac, sizeof frac, "%.4f",
                r.emitted ? double(r.misleading) / double(r.emitted) : 0.0);
  out += "misleading " + std::to_string(r.misleading) + " (" + frac + ")\n";
  out += std::string("shortfall ") + (r.shortfall ? "yes" : "no") + "\n";
  out += "\n[chart]\n";
  for (const auto& [k, v] : r.by_chart)
    out += k + " " + std::to_string(v) + "\n";
  out += "\n[misleader]\n";
  for (const auto& [k, v] : r.by_misleader)
    out += k + " " + std::to_string(v) + "\n";
  out += "\n[split]\n";
  for (const auto& [k, v] : r.by_split)
    out += k + " " + std::to_string(v) + "\n";
  if (!r.warnings.empty()) {
    out += "\n[warnings]\n";
    for (const auto& w : r.warnings) out += w + "\n";
  }
  return out;
}

}  // namespace mischart
