// Copyright 2026 The discamc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "discamc/binning.h"
#include "discamc/dataset.h"
#include "discamc/errors.h"
#include "discamc/eval.h"
#include "discamc/features.h"
#include "discamc/llm_client.h"
#include "discamc/prompt.h"
#include "discamc/report.h"
#include "discamc/shortlist.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"
#include "spdlog/sinks/ostream_sink.h"
#include "spdlog/spdlog.h"

namespace discamc::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  int verbosity = 0;
  bool quiet = false;
  std::string out_dir = "out";
  uint64_t seed = 0;
};

// Flags shared by every subcommand that runs the prompt pipeline.
struct PipelineFlags {
  EvalConfig cfg;
  std::string mock;
  std::string endpoint;
  std::string model = EndpointConfig{}.model_name;
  int max_in_flight = EndpointConfig{}.max_in_flight;
  double timeout_s = 120.0;
  int max_retries = EndpointConfig{}.max_retries;
  double max_rps = 0.0;
  std::string strategy = "low_snr";
};

struct GenerateFlags {
  std::vector<std::string> classes;
  int per_class = 20;
  double snr_min = -10, snr_max = 10;
  int snr_steps = 5;
  int n_symbols = kDefaultSymbols;
  int sps = kDefaultSps;
};

struct FileFlags {
  std::string input;
  std::string input2;
  std::string output;
  int bins = 5;
  double snr_min = kDefaultSnrLo, snr_max = kDefaultSnrHi;
  std::string corpus_id;
};

class LoggerScope {
 public:
  LoggerScope(std::ostream& err, const GlobalOptions& opts)
      : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("discamc", sink);
    logger->set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::info;
    if (opts.quiet) level = spdlog::level::warn;
    if (opts.verbosity == 1) level = spdlog::level::debug;
    if (opts.verbosity >= 2) level = spdlog::level::trace;
    logger->set_level(level);
    spdlog::set_default_logger(logger);
  }
  ~LoggerScope() { spdlog::set_default_logger(previous_); }

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

fs::path OrDefault(const std::string& path, const GlobalOptions& g, std::string_view name) {
  if (!path.empty()) return path;
  return fs::path(g.out_dir) / name;
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void WriteTextOut(const std::string& target, const std::string& text, std::ostream& out) {
  if (target.empty() || target == "-") {
    out << text;
    return;
  }
  EnsureParent(target);
  std::ofstream f(target, std::ios::binary);
  f << text;
  if (!f) throw IoError(fmt::format("cannot write '{}'", target));
}

std::vector<ReportFormat> ParseFormats(const std::vector<std::string>& names) {
  std::vector<ReportFormat> out;
  for (const auto& n : names) out.push_back(ParseReportFormat(n));
  return out;
}

void AddPipelineOptions(CLI::App* sub, PipelineFlags* f) {
  EvalConfig& c = f->cfg;
  sub->add_option("--dataset", c.dataset_manifest,
                  "Query dataset manifest (default: synthesize per-class queries)");
  sub->add_option("--pool", c.pool_manifest,
                  "Exemplar pool manifest (default: synthesize a separate pool)");
  sub->add_option("--bins", c.bins, "Discretization bins B")->capture_default_str();
  sub->add_option("--k", c.k, "Shortlist size")->capture_default_str();
  sub->add_option("--strategy", f->strategy, "Exemplar strategy: random, centroid, low_snr")
      ->capture_default_str();
  sub->add_flag("--include-unknown", c.include_unknown, "Add an UNKNOWN option to prompts");
  sub->add_option("--shortlist-provider", c.provider, "centroid | oracle | file:PATH")
      ->capture_default_str();
  sub->add_option("--per-class", c.per_class, "Synthetic queries per class")
      ->capture_default_str();
  sub->add_option("--pool-per-class", c.pool_per_class, "Synthetic pool segments per class")
      ->capture_default_str();
  sub->add_option("--snr-min", c.snr_min, "Lowest SNR in dB")->capture_default_str();
  sub->add_option("--snr-max", c.snr_max, "Highest SNR in dB")->capture_default_str();
  sub->add_option("--snr-steps", c.snr_steps, "Number of SNR grid points")
      ->capture_default_str();
  sub->add_option("--n-symbols", c.n_symbols, "Symbols per synthetic segment")
      ->capture_default_str();
  sub->add_option("--sps", c.sps, "Samples per symbol")->capture_default_str();
  sub->add_option("--workers", c.workers, "Worker threads (0: automatic)")
      ->capture_default_str();
  sub->add_option("--mock", f->mock,
                  "Offline classifier: first_option, fixed:LABEL or centroid "
                  "(omit to call the live endpoint)");
  sub->add_option("--endpoint", f->endpoint,
                  "OpenAI-compatible base URL (overrides DISCAMC_BASE_URL)");
  sub->add_option("--model", f->model, "Model name for the live endpoint")
      ->capture_default_str();
  sub->add_option("--max-in-flight", f->max_in_flight, "Concurrent live requests")
      ->capture_default_str();
  sub->add_option("--timeout-s", f->timeout_s, "Per-request timeout in seconds")
      ->capture_default_str();
  sub->add_option("--max-retries", f->max_retries, "Retries on 429/5xx/network errors")
      ->capture_default_str();
  sub->add_option("--max-rps", f->max_rps, "Request rate cap per second (0: none)")
      ->capture_default_str();
}

EvalConfig ResolveConfig(const PipelineFlags& f, const GlobalOptions& g) {
  EvalConfig cfg = f.cfg;
  cfg.seed = g.seed;
  cfg.strategy = ParseStrategy(f.strategy);
  cfg.mock_policy = f.mock;
  cfg.Validate();
  return cfg;
}

EndpointConfig ResolveEndpoint(const PipelineFlags& f) {
  EndpointConfig ep = EndpointConfigFromEnv(EndpointConfig{});
  if (!f.endpoint.empty()) ep.base_url = f.endpoint;
  ep.model_name = f.model;
  ep.max_in_flight = f.max_in_flight;
  if (!(f.timeout_s > 0)) throw ArgumentError("--timeout-s must be positive");
  ep.timeout = std::chrono::milliseconds(static_cast<int64_t>(std::llround(f.timeout_s * 1000)));
  ep.max_retries = f.max_retries;
  ep.max_requests_per_second = f.max_rps;
  ep.Validate();
  return ep;
}

std::unique_ptr<Classifier> ClassifierFor(const EvalConfig& cfg, const EvalData& data,
                                          const PipelineFlags& f) {
  if (cfg.mock_policy.empty()) {
    const EndpointConfig ep = ResolveEndpoint(f);
    if (ep.api_key.empty()) {
      spdlog::warn("{} is not set; requests go out without credentials", kApiKeyEnv);
    }
    spdlog::info("live endpoint {}", ep.ToRedactedJson());
  }
  return MakeClassifier(cfg, data, cfg.mock_policy.empty() ? ResolveEndpoint(f)
                                                           : EndpointConfig{});
}

class CliApp {
 public:
  CliApp(std::ostream& out, std::ostream& err);

  CLI::App& app() { return app_; }
  int Dispatch();

 private:
  void Generate();
  void Features();
  void CalibrateCmd();
  void QuantizeCmd();
  void ShortlistTrain();
  void ShortlistEval();
  void PromptCmd();
  void ClassifyCmd();
  void EvalCmd();
  void AblateKCmd();
  void AblateBinsCmd();
  void AblateStrategyCmd();

  CLI::App* AddCommand(const std::string& name, const std::string& help,
                       std::function<void()> run);

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Discretized-statistics in-context modulation classification pipeline",
                "discamc"};
  std::map<std::string, std::function<void()>> actions_;

  GlobalOptions global_;
  GenerateFlags gen_;
  FileFlags file_;
  PipelineFlags pipe_;
  std::string query_id_;
  std::string model_path_;
  std::string features_path_;
  std::vector<std::string> formats_{"json"};
  std::vector<int> k_values_{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> bin_values_{3, 5, 10, 20};
  std::vector<std::string> strategies_{"random", "centroid", "low_snr"};
};

CLI::App* CliApp::AddCommand(const std::string& name, const std::string& help,
                             std::function<void()> run) {
  actions_[name] = std::move(run);
  return app_.add_subcommand(name, help);
}

CliApp::CliApp(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.set_help_all_flag("--help-all", "Print help for every subcommand and flag");
  app_.set_config("--config", "", "TOML/INI file of option values ([subcommand] sections)");
  app_.allow_config_extras(CLI::config_extras_mode::error);
  app_.add_flag("-v,--verbose", global_.verbosity, "More log output (repeatable)");
  app_.add_flag("-q,--quiet", global_.quiet, "Only warnings and errors");
  app_.add_option("--out", global_.out_dir, "Output directory")->capture_default_str();
  app_.add_option("--seed", global_.seed, "Master seed")->capture_default_str();

  auto* gen = AddCommand("generate", "Synthesize a labeled I/Q dataset", [this] { Generate(); });
  gen->add_option("--classes", gen_.classes, "Comma-separated labels (default: all ten)")
      ->delimiter(',');
  gen->add_option("--per-class", gen_.per_class, "Segments per class")->capture_default_str();
  gen->add_option("--snr-min", gen_.snr_min, "Lowest SNR in dB")->capture_default_str();
  gen->add_option("--snr-max", gen_.snr_max, "Highest SNR in dB")->capture_default_str();
  gen->add_option("--snr-steps", gen_.snr_steps, "Number of SNR grid points")
      ->capture_default_str();
  gen->add_option("--n-symbols", gen_.n_symbols, "Symbols per segment")->capture_default_str();
  gen->add_option("--sps", gen_.sps, "Samples per symbol")->capture_default_str();

  auto* feat = AddCommand("features", "Extract the 21 statistical features per segment",
                          [this] { Features(); });
  feat->add_option("--manifest", file_.input, "Dataset manifest")->required();
  feat->add_option("--output", file_.output, "CSV path, '-' for stdout (default: <out>/features.csv)");

  auto* cal = AddCommand("calibrate", "Fit equal-frequency bin edges on a feature corpus",
                         [this] { CalibrateCmd(); });
  cal->add_option("--corpus", file_.input, "Features CSV")->required();
  cal->add_option("--bins", file_.bins, "Number of bins B")->capture_default_str();
  cal->add_option("--snr-min", file_.snr_min, "Lower end of the SNR bin range")
      ->capture_default_str();
  cal->add_option("--snr-max", file_.snr_max, "Upper end of the SNR bin range")
      ->capture_default_str();
  cal->add_option("--output", file_.output, "Scheme JSON (default: <out>/scheme.json)");

  auto* quant = AddCommand("quantize", "Map features to letter tokens", [this] { QuantizeCmd(); });
  quant->add_option("--scheme", file_.input2, "Scheme JSON")->required();
  quant->add_option("--features", file_.input, "Features CSV")->required();
  quant->add_option("--output", file_.output, "Symbolic CSV (default: <out>/symbolic.csv)");

  auto* st = AddCommand("shortlist-train", "Train the nearest-centroid shortlister",
                        [this] { ShortlistTrain(); });
  st->add_option("--features", file_.input, "Training features CSV")->required();
  st->add_option("--corpus-id", file_.corpus_id, "Identifier stored in the model");
  st->add_option("--output", file_.output, "Model JSON (default: <out>/centroids.json)");

  auto* se = AddCommand("shortlist-eval", "Top-k accuracy table for k = 1..10",
                        [this] { ShortlistEval(); });
  se->add_option("--model-file", model_path_, "Centroid model JSON (default: train on the pool)");
  se->add_option("--features", features_path_,
                 "Test features CSV, ids q0000.. in row order (default: synthetic queries)");
  se->add_option("--format", formats_, "Outputs: json, csv, svg")->delimiter(',')
      ->capture_default_str();
  AddPipelineOptions(se, &pipe_);

  auto* pr = AddCommand("prompt", "Print the prompt built for one query", [this] { PromptCmd(); });
  pr->add_option("--query-id", query_id_, "Query id such as q0000")->required();
  pr->add_option("--output", file_.output, "Output file, '-' for stdout")->capture_default_str();
  AddPipelineOptions(pr, &pipe_);

  auto* cl = AddCommand("classify", "Classify one query and print the result",
                        [this] { ClassifyCmd(); });
  cl->add_option("--query-id", query_id_, "Query id such as q0000")->required();
  AddPipelineOptions(cl, &pipe_);

  auto* ev = AddCommand("eval", "Run the evaluation protocol and write a report",
                        [this] { EvalCmd(); });
  ev->add_option("--format", formats_, "Outputs: json, csv, svg")->delimiter(',')
      ->capture_default_str();
  AddPipelineOptions(ev, &pipe_);

  auto* ak = AddCommand("ablate-k", "Accuracy and prompt size across shortlist sizes",
                        [this] { AblateKCmd(); });
  ak->add_option("--k-values", k_values_, "Comma-separated k values")->delimiter(',')
      ->capture_default_str();
  ak->add_option("--format", formats_, "Outputs: json, csv, svg")->delimiter(',')
      ->capture_default_str();
  AddPipelineOptions(ak, &pipe_);

  auto* ab = AddCommand("ablate-bins", "Accuracy across bin counts", [this] { AblateBinsCmd(); });
  ab->add_option("--bins-values", bin_values_, "Comma-separated B values")->delimiter(',')
      ->capture_default_str();
  ab->add_option("--format", formats_, "Outputs: json, csv, svg")->delimiter(',')
      ->capture_default_str();
  AddPipelineOptions(ab, &pipe_);

  auto* as = AddCommand("ablate-strategy", "Accuracy across exemplar strategies",
                        [this] { AblateStrategyCmd(); });
  as->add_option("--strategies", strategies_, "Comma-separated strategies")->delimiter(',')
      ->capture_default_str();
  as->add_option("--format", formats_, "Outputs: json, csv, svg")->delimiter(',')
      ->capture_default_str();
  AddPipelineOptions(as, &pipe_);
}

int CliApp::Dispatch() {
  LoggerScope logging(err_, global_);
  err_ << "seed: " << global_.seed << "\n";
  const std::string name = app_.get_subcommands().front()->get_name();
  actions_.at(name)();
  return kExitOk;
}

void CliApp::Generate() {
  DatasetSpec spec;
  if (gen_.classes.empty()) {
    spec.classes.assign(kAllLabels.begin(), kAllLabels.end());
  } else {
    for (const auto& c : gen_.classes) spec.classes.push_back(LabelFromString(c));
  }
  spec.per_class = gen_.per_class;
  spec.snr_grid = Linspace(gen_.snr_min, gen_.snr_max, gen_.snr_steps);
  spec.n_symbols = gen_.n_symbols;
  spec.sps = gen_.sps;
  spec.seed = global_.seed;
  const DatasetManifest m = GenerateDataset(spec, global_.out_dir);
  spdlog::info("wrote {} segments to {}", m.entries.size(), global_.out_dir);
  out_ << (fs::path(global_.out_dir) / "manifest.json").string() << "\n";
}

void CliApp::Features() {
  const DatasetManifest m = ReadManifest(file_.input);
  std::vector<LabeledFeatures> rows;
  rows.reserve(m.entries.size());
  for (size_t i = 0; i < m.entries.size(); ++i) {
    const IQSegment seg = LoadSegment(m, i);
    rows.push_back({ExtractFeatures(seg), seg.label});
  }
  if (file_.output == "-") {
    WriteFeaturesCsv(out_, rows);
    return;
  }
  const fs::path path = OrDefault(file_.output, global_, "features.csv");
  EnsureParent(path);
  WriteFeaturesCsv(path, rows);
  spdlog::info("wrote {} feature rows to {}", rows.size(), path.string());
}

void CliApp::CalibrateCmd() {
  std::vector<FeatureVector> corpus;
  for (const auto& r : ReadFeaturesCsv(file_.input)) corpus.push_back(r.features);
  const BinningScheme scheme = Calibrate(corpus, file_.bins, file_.snr_min, file_.snr_max);
  const fs::path path = OrDefault(file_.output, global_, "scheme.json");
  EnsureParent(path);
  WriteScheme(path, scheme);
  spdlog::info("calibrated B={} on {} rows -> {}", file_.bins, corpus.size(), path.string());
}

void CliApp::QuantizeCmd() {
  const BinningScheme scheme = ReadScheme(file_.input2);
  const auto rows = ReadFeaturesCsv(file_.input);
  const fs::path path = OrDefault(file_.output, global_, "symbolic.csv");
  EnsureParent(path);
  WriteSymbolicCsv(path, rows, scheme);
  spdlog::info("quantized {} rows -> {}", rows.size(), path.string());
}

void CliApp::ShortlistTrain() {
  const auto rows = ReadFeaturesCsv(file_.input);
  std::vector<ModulationLabel> classes;
  for (ModulationLabel l : kAllLabels) {
    if (std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.label == l; })) {
      classes.push_back(l);
    }
  }
  const std::string corpus_id =
      file_.corpus_id.empty() ? fs::path(file_.input).filename().string() : file_.corpus_id;
  const CentroidModel model = TrainCentroids(rows, corpus_id, classes);
  const fs::path path = OrDefault(file_.output, global_, "centroids.json");
  EnsureParent(path);
  WriteCentroidModel(path, model);
  spdlog::info("trained centroids for {} classes on {} rows -> {}", classes.size(),
               rows.size(), path.string());
}

void CliApp::ShortlistEval() {
  EvalConfig cfg = ResolveConfig(pipe_, global_);
  std::vector<Query> queries;
  std::optional<CentroidModel> model;
  std::vector<ModulationLabel> universe;
  if (!features_path_.empty()) {
    const auto rows = ReadFeaturesCsv(features_path_);
    for (size_t i = 0; i < rows.size(); ++i) {
      queries.push_back({fmt::format("q{:04d}", i), rows[i]});
    }
    for (ModulationLabel l : kAllLabels) {
      if (std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.label == l; })) {
        universe.push_back(l);
      }
    }
  } else {
    EvalData data = PrepareEvalData(cfg);
    queries = std::move(data.queries);
    universe = data.classes;
    model = std::move(data.model);
  }
  if (!model_path_.empty()) {
    model = ReadCentroidModel(model_path_);
    universe = model->classes;
  }
  if (queries.empty()) throw PipelineError("no test rows");
  const auto provider = MakeShortlistProvider(cfg.provider, model ? &*model : nullptr, universe);
  const int max_k = std::min<int>(kNumLabels, static_cast<int>(universe.size()));
  std::vector<double> acc;
  out_ << "k\ttopk_accuracy\n";
  for (int k = 1; k <= max_k; ++k) {
    int hits = 0;
    for (size_t i = 0; i < queries.size(); ++i) {
      const auto& q = queries[i];
      const ShortlistQuery sq{q.id, &q.data.features, q.data.label,
                              ShortlistSeed(cfg.seed, i)};
      if (provider->Candidates(sq, k).Contains(q.data.label)) ++hits;
    }
    acc.push_back(static_cast<double>(hits) / static_cast<double>(queries.size()));
    out_ << fmt::format("{}\t{:.4f}\n", k, acc.back());
  }
  for (ReportFormat f : ParseFormats(formats_)) {
    for (const auto& p : EmitTopKCurve(acc, f, global_.out_dir)) {
      spdlog::info("wrote {}", p.string());
    }
  }
}

void CliApp::PromptCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const EvalData data = PrepareEvalData(cfg);
  const QueryPromptBuilder builder(cfg, data);
  const auto built = builder.Build(FindQuery(data, query_id_));
  spdlog::info("{} options, ~{} tokens", built.bundle.options.size(),
               built.bundle.estimated_tokens);
  WriteTextOut(file_.output, built.bundle.text, out_);
}

void CliApp::ClassifyCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const EvalData data = PrepareEvalData(cfg);
  const size_t index = FindQuery(data, query_id_);
  const QueryPromptBuilder builder(cfg, data);
  const auto built = builder.Build(index);
  auto classifier = ClassifierFor(cfg, data, pipe_);
  const Query& q = data.queries[index];
  const ClassificationResult r = classifier->Classify(built.bundle, &q.data.features);
  spdlog::debug("raw response: {}", r.raw_response);
  const nlohmann::json line = {{"id", q.id},
                               {"label", LabelName(q.data.label)},
                               {"predicted", r.predicted.ToString()},
                               {"options", built.bundle.options},
                               {"attempts", r.attempt_count},
                               {"latency_ms", r.latency_ms}};
  out_ << line.dump() << "\n";
}

void CliApp::EvalCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const auto formats = ParseFormats(formats_);
  const EvalData data = PrepareEvalData(cfg);
  auto classifier = ClassifierFor(cfg, data, pipe_);
  const EvalReport report = RunEval(cfg, data, *classifier);
  for (ReportFormat f : formats) {
    for (const auto& p : EmitReport(report, f, global_.out_dir)) {
      spdlog::info("wrote {}", p.string());
    }
  }
  out_ << fmt::format("queries: {}\naccuracy: {:.4f}\nparse_failures: {}\nshortlist_hit_rate: {:.4f}\n",
                      report.total, report.overall_accuracy, report.parse_failures,
                      report.shortlist_hit_rate);
  out_ << fmt::format("mean_tokens: {:.1f}\n", report.tokens.mean);
  if (report.token_ratio) {
    out_ << fmt::format("baseline_mean_tokens: {:.1f}\ntoken_ratio: {:.4f}\n",
                        report.baseline_tokens->mean, *report.token_ratio);
  }
}

void CliApp::AblateKCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const auto formats = ParseFormats(formats_);
  const EvalData data = PrepareEvalData(cfg);
  auto classifier = ClassifierFor(cfg, data, pipe_);
  const auto series = AblateK(cfg, data, *classifier, k_values_);
  out_ << "k\taccuracy\tmean_tokens\n";
  for (const auto& p : series) out_ << fmt::format("{}\t{:.4f}\t{:.1f}\n", p.k, p.accuracy, p.mean_tokens);
  for (ReportFormat f : formats) {
    for (const auto& p : EmitKSeries(series, f, global_.out_dir)) spdlog::info("wrote {}", p.string());
  }
}

void CliApp::AblateBinsCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const auto formats = ParseFormats(formats_);
  const EvalData data = PrepareEvalData(cfg);
  auto classifier = ClassifierFor(cfg, data, pipe_);
  const auto series = AblateBins(cfg, data, *classifier, bin_values_);
  out_ << "bins\taccuracy\tmean_tokens\tfields_min\tfields_max\n";
  for (const auto& p : series) {
    out_ << fmt::format("{}\t{:.4f}\t{:.1f}\t{}\t{}\n", p.bins, p.accuracy, p.mean_tokens,
                        p.statistics_fields_min, p.statistics_fields_max);
  }
  for (ReportFormat f : formats) {
    for (const auto& p : EmitBinsSeries(series, f, global_.out_dir)) {
      spdlog::info("wrote {}", p.string());
    }
  }
}

void CliApp::AblateStrategyCmd() {
  const EvalConfig cfg = ResolveConfig(pipe_, global_);
  const auto formats = ParseFormats(formats_);
  std::vector<ExemplarStrategy> strategies;
  for (const auto& s : strategies_) strategies.push_back(ParseStrategy(s));
  const EvalData data = PrepareEvalData(cfg);
  auto classifier = ClassifierFor(cfg, data, pipe_);
  const auto series = AblateStrategy(cfg, data, *classifier, strategies);
  out_ << "strategy\taccuracy\tmean_tokens\n";
  for (const auto& p : series) {
    out_ << fmt::format("{}\t{:.4f}\t{:.1f}\n", StrategyName(p.strategy), p.accuracy,
                        p.mean_tokens);
  }
  for (ReportFormat f : formats) {
    for (const auto& p : EmitStrategySeries(series, f, global_.out_dir)) {
      spdlog::info("wrote {}", p.string());
    }
  }
}

void CollectNames(const CLI::App* app, std::vector<std::string>* names) {
  for (const CLI::Option* opt : app->get_options()) {
    for (const auto& n : opt->get_lnames()) names->push_back("--" + n);
  }
  for (const CLI::App* sub : app->get_subcommands({})) CollectNames(sub, names);
}

std::optional<std::string> UnknownSubcommand(const CLI::App& app,
                                             const std::vector<std::string>& args) {
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--seed" || a == "--config") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    try {
      app.get_subcommand(a);
      return std::nullopt;
    } catch (const CLI::OptionNotFound&) {
      return a;
    }
  }
  return std::nullopt;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliApp cli(out, err);
  CLI::App& app = cli.app();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (app.get_subcommands().empty()) {
      if (auto name = UnknownSubcommand(app, args)) {
        err << "unknown subcommand '" << *name << "'\n";
      }
      err << app.help();
    }
    return kExitUsage;
  }
  try {
    return cli.Dispatch();
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

std::vector<std::string> AllOptionNames() {
  std::ostringstream sink;
  CliApp cli(sink, sink);
  std::vector<std::string> names;
  CollectNames(&cli.app(), &names);
  return names;
}

}  // namespace discamc::cli
