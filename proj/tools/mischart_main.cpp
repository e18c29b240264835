#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mischart/adapters.hpp"
#include "mischart/axismeta.hpp"
#include "mischart/evalkit.hpp"
#include "mischart/linter.hpp"
#include "mischart/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mischart;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << body;
}

SplitRatios parse_ratios(const std::string& s) {
  SplitRatios r;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &r.train, &r.val, &r.test) != 3)
    throw std::invalid_argument("expected three comma separated ratios, got '" +
                                s + "'");
  return r;
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path q(p);
  return q.is_absolute() ? q.string() : (base / q).string();
}

std::string fired_line(const LintReport& rep) {
  if (rep.fired.empty()) return "no misleader";
  std::string out;
  for (Misleader m : rep.fired) {
    if (!out.empty()) out += ", ";
    out += name(m);
  }
  return out;
}

struct GenerateOpts {
  GenerationConfig cfg;
  std::string splits = "0.93,0.02,0.05";
  std::string mix = "0.46,0.47,0.07";
  std::vector<std::string> weights;
};

int cmd_generate(GenerateOpts& o) {
  o.cfg.ratios = parse_ratios(o.splits);
  SplitRatios mix = parse_ratios(o.mix);
  o.cfg.bar_share = mix.train;
  o.cfg.line_share = mix.val;
  o.cfg.pie_share = mix.test;
  for (const auto& w : o.weights) {
    auto eq = w.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--weight expects NAME=W, got '" + w + "'");
    auto m = misleader_from_name(w.substr(0, eq));
    if (!m)
      throw std::invalid_argument("unknown misleader '" + w.substr(0, eq) +
                                  "'");
    o.cfg.weights[*m] = std::stod(w.substr(eq + 1));
  }
  GenerationReport rep = generate_dataset(o.cfg);
  std::cout << run_report_text(rep);
  return rep.shortfall ? 2 : 0;
}

struct LintOpts {
  std::string axis;
  std::string manifest;
  std::string split;
};

int cmd_lint(const LintOpts& o) {
  if (o.axis.empty() == o.manifest.empty())
    throw std::invalid_argument("pass exactly one of --axis or --manifest");
  if (!o.axis.empty()) {
    auto am = axis_metadata_from_json(read_text_file(o.axis));
    std::cout << fired_line(lint(am)) << "\n";
    return 0;
  }
  auto records = load_manifest(o.manifest);
  fs::path base = fs::path(o.manifest).parent_path();
  int failures = 0;
  for (const auto& r : records) {
    if (!o.split.empty() && r.split != o.split) continue;
    try {
      LintReport rep;
      if (r.axis_metadata_path) {
        auto am = axis_metadata_from_json(
            read_text_file(resolve(base, *r.axis_metadata_path)));
        rep = lint(am);
      } else {
        rep = lint(std::nullopt);
      }
      std::cout << r.id << "\t" << fired_line(rep) << "\n";
    } catch (const std::exception& ex) {
      std::cout << r.id << "\terror: " << ex.what() << "\n";
      ++failures;
    }
  }
  return failures ? 2 : 0;
}

struct EvaluateOpts {
  std::string manifest;
  std::string predictions;
  std::string out;
};

int cmd_evaluate(const EvaluateOpts& o) {
  auto records = load_manifest(o.manifest);
  auto preds = load_predictions(o.predictions);
  MetricsReport rep = evaluate(records, preds);
  std::string json = report_to_json(rep);
  if (!o.out.empty()) write_text_file(o.out, json + "\n");
  std::cout << json << "\n";
  return 0;
}

struct SplitOpts {
  std::string manifest;
  std::string out;
  std::string ratios = "0.93,0.02,0.05";
  uint64_t seed = 1;
};

int cmd_split(const SplitOpts& o) {
  auto records = load_manifest(o.manifest);
  std::vector<std::string> warnings;
  auto splits = stratified_split(records, parse_ratios(o.ratios), o.seed,
                                 &warnings);
  for (size_t i = 0; i < records.size(); ++i) records[i].split = splits[i];
  save_manifest(o.out, records);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

struct PromptOpts {
  std::string vocabulary = "full";
  std::string out;
};

int cmd_prompt(const PromptOpts& o) {
  auto vocab = o.vocabulary == "synthetic" ? synthetic_vocabulary()
                                           : full_vocabulary();
  std::string text = build_prompt(vocab);
  if (o.out.empty())
    std::cout << text;
  else
    write_text_file(o.out, text);
  return 0;
}

struct PredictOpts {
  std::string manifest;
  std::string predictor = "linter";
  std::string out;
  PredictorConfig cfg;
  std::string vocabulary = "full";
};

int cmd_predict(PredictOpts& o) {
  o.cfg.kind = o.predictor == "external" ? PredictorConfig::Kind::external
                                         : PredictorConfig::Kind::linter;
  if (o.cfg.kind == PredictorConfig::Kind::external && o.cfg.endpoint.empty())
    throw std::invalid_argument("--predictor external requires --endpoint");
  o.cfg.synthetic_vocabulary = o.vocabulary == "synthetic";
  auto records = load_manifest(o.manifest);
  o.cfg.base_dir = fs::path(o.manifest).parent_path().string();
  auto preds = predict(o.cfg, records);
  save_predictions(o.out, preds);
  size_t failed = 0;
  for (const auto& p : preds)
    if (!p.note.empty()) ++failed;
  if (failed) {
    std::cerr << failed << " record(s) failed; notes are in " << o.out << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mischart: generates charts with labeled misleaders, lints axis "
      "metadata, and scores misleader predictors"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* cg = app.add_subcommand("generate", "Generate a labeled corpus");
  cg->add_option("--tables", gen.cfg.tables_dir, "Directory of source CSVs")
      ->required();
  cg->add_option("--out", gen.cfg.out_dir, "Output directory")->required();
  cg->add_option("--seed", gen.cfg.seed, "Global seed");
  cg->add_option("--count", gen.cfg.count, "Target instance count");
  cg->add_option("--misleading-frac", gen.cfg.misleading_fraction,
                 "Fraction of misleading instances");
  cg->add_option("--splits", gen.splits, "train,val,test ratios");
  cg->add_option("--chart-mix", gen.mix, "bar,line,pie share targets");
  cg->add_option("--weight", gen.weights,
                 "Misleader sampling weight as NAME=W (repeatable)");
  cg->add_option("--max-per-table", gen.cfg.max_per_table,
                 "Prepared-table cap per source");
  cg->add_option("--jobs", gen.cfg.jobs, "Worker threads (0 = cores)");

  LintOpts li;
  auto* cl = app.add_subcommand("lint", "Run the axis-metadata checks");
  cl->add_option("--axis", li.axis, "One axis-metadata JSON file");
  cl->add_option("--manifest", li.manifest, "Manifest JSONL to lint");
  cl->add_option("--split", li.split, "Restrict to one split");

  EvaluateOpts ev;
  auto* ce = app.add_subcommand("evaluate", "Score predictions");
  ce->add_option("--manifest", ev.manifest, "Manifest JSONL")->required();
  ce->add_option("--predictions", ev.predictions, "Predictions JSONL")
      ->required();
  ce->add_option("--out", ev.out, "Write the JSON report here");

  SplitOpts sp;
  auto* cs = app.add_subcommand("split", "Reassign stratified splits");
  cs->add_option("--manifest", sp.manifest, "Manifest JSONL")->required();
  cs->add_option("--out", sp.out, "Rewritten manifest path")->required();
  cs->add_option("--ratios", sp.ratios, "train,val,test ratios");
  cs->add_option("--seed", sp.seed, "Split seed");

  PromptOpts pr;
  auto* cp = app.add_subcommand("prompt", "Print the predictor prompt");
  cp->add_option("--vocabulary", pr.vocabulary, "full or synthetic")
      ->check(CLI::IsMember({"full", "synthetic"}));
  cp->add_option("--out", pr.out, "Write the prompt here (default stdout)");

  PredictOpts pd;
  auto* cd = app.add_subcommand("predict", "Run a predictor over a manifest");
  cd->add_option("--manifest", pd.manifest, "Manifest JSONL")->required();
  cd->add_option("--predictor", pd.predictor, "linter or external")
      ->check(CLI::IsMember({"linter", "external"}));
  cd->add_option("--out", pd.out, "Predictions JSONL path")->required();
  cd->add_option("--endpoint", pd.cfg.endpoint,
                 "Chat-completion endpoint, e.g. http://host:port");
  cd->add_option("--model", pd.cfg.model, "Model name sent to the endpoint");
  cd->add_option("--credential-env", pd.cfg.credential_env,
                 "Env var holding the bearer token");
  cd->add_option("--temperature", pd.cfg.temperature, "Sampling temperature");
  cd->add_option("--vocabulary", pd.vocabulary, "full or synthetic")
      ->check(CLI::IsMember({"full", "synthetic"}));
  cd->add_option("--retries", pd.cfg.retries, "Attempts per record");
  cd->add_option("--timeout", pd.cfg.timeout_seconds,
                 "Read timeout in seconds");
  cd->add_option("--jobs", pd.cfg.jobs, "Concurrent requests");
  cd->add_option("--audit", pd.cfg.audit_path,
                 "Log raw responses to this JSONL file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cg) return cmd_generate(gen);
    if (*cl) return cmd_lint(li);
    if (*ce) return cmd_evaluate(ev);
    if (*cs) return cmd_split(sp);
    if (*cp) return cmd_prompt(pr);
    if (*cd) return cmd_predict(pd);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
