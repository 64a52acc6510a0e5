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

#include "discamc/eval.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "discamc/errors.h"
#include "discamc/random.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"
#include "spdlog/spdlog.h"

namespace discamc {
namespace {

using nlohmann::json;

// Sub-stream indices under the master seed.
constexpr uint64_t kQueryDataStream = 1;
constexpr uint64_t kPoolDataStream = 2;
constexpr uint64_t kShortlistStream = 3;
constexpr uint64_t kExemplarStream = 4;

std::vector<Query> LoadOrGenerate(const std::string& manifest_path, const EvalConfig& cfg,
                                  int per_class, uint64_t seed, std::string_view prefix) {
  std::vector<Query> out;
  if (!manifest_path.empty()) {
    const DatasetManifest manifest = ReadManifest(manifest_path);
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
      const IQSegment seg = LoadSegment(manifest, i);
      out.push_back({fmt::format("{}{:04d}", prefix, i), {ExtractFeatures(seg), seg.label}});
    }
    return out;
  }
  DatasetSpec spec;
  spec.classes.assign(kAllLabels.begin(), kAllLabels.end());
  spec.per_class = per_class;
  spec.snr_grid = Linspace(cfg.snr_min, cfg.snr_max, cfg.snr_steps);
  spec.n_symbols = cfg.n_symbols;
  spec.sps = cfg.sps;
  spec.seed = seed;
  const auto generated = GenerateSegments(spec);
  out.reserve(generated.size());
  for (size_t i = 0; i < generated.size(); ++i) {
    const auto& g = generated[i];
    out.push_back({fmt::format("{}{:04d}", prefix, i),
                   {ExtractFeatures(g.segment), g.segment.label}});
  }
  return out;
}

[[noreturn]] void RethrowForQuery(std::exception_ptr ep, const std::string& id) {
  try {
    std::rethrow_exception(ep);
  } catch (const TransportError& e) {
    throw TransportError(fmt::format("query {}: {}", id, e.what()), e.last_status());
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("query {}: {}", id, e.what()));
  } catch (const IoError& e) {
    throw IoError(fmt::format("query {}: {}", id, e.what()));
  } catch (const ArgumentError& e) {
    throw ArgumentError(fmt::format("query {}: {}", id, e.what()));
  } catch (const Error& e) {
    throw PipelineError(fmt::format("query {}: {}", id, e.what()));
  }
}

TokenStats Summarize(const std::vector<int64_t>& values) {
  TokenStats s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0;
  for (int64_t v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

double SnrBucketCenter(double snr_db) {
  if (std::isinf(snr_db)) return snr_db;
  return 5.0 * std::round(snr_db / 5.0);
}

int WorkerCount(const EvalConfig& cfg, const Classifier& classifier, size_t jobs) {
  int n = cfg.workers;
  if (n <= 0) n = classifier.MaxConcurrency();
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(n, static_cast<int>(std::max<size_t>(jobs, 1))));
}

}  // namespace

void EvalConfig::Validate() const {
  if (bins < kMinBins || bins > kMaxBins) {
    throw ArgumentError(fmt::format("bins must be in [{}, {}], got {}", kMinBins, kMaxBins, bins));
  }
  ValidateK(k);
  if (per_class < 1 || pool_per_class < 1) throw ArgumentError("per-class counts must be >= 1");
  if (snr_steps < 1) throw ArgumentError("snr_steps must be >= 1");
  if (!(snr_min < snr_max)) {
    throw ArgumentError(fmt::format("SNR range [{}, {}] is empty", snr_min, snr_max));
  }
  if (!mock_policy.empty()) ParseMockPolicy(mock_policy);
}

EvalData PrepareEvalData(const EvalConfig& cfg) {
  cfg.Validate();
  EvalData data;
  data.queries = LoadOrGenerate(cfg.dataset_manifest, cfg, cfg.per_class,
                                DeriveSeed(cfg.seed, kQueryDataStream), "q");
  data.pool = LoadOrGenerate(cfg.pool_manifest, cfg, cfg.pool_per_class,
                             DeriveSeed(cfg.seed, kPoolDataStream), "p");
  if (data.queries.empty()) throw PipelineError("evaluation dataset is empty");

  std::set<ModulationLabel> classes;
  for (const auto& q : data.queries) classes.insert(q.data.label);
  data.classes.assign(classes.begin(), classes.end());

  std::array<int, kNumLabels> pool_counts{};
  for (const auto& p : data.pool) ++pool_counts[LabelIndex(p.data.label)];
  std::vector<std::string> missing;
  for (ModulationLabel l : data.classes) {
    if (pool_counts[LabelIndex(l)] == 0) missing.emplace_back(LabelName(l));
  }
  if (!missing.empty()) {
    throw PipelineError(fmt::format("exemplar pool has no samples of: {}",
                                    fmt::join(missing, ", ")));
  }
  std::set<std::string> query_ids;
  for (const auto& q : data.queries) query_ids.insert(q.id);
  for (const auto& p : data.pool) {
    if (query_ids.contains(p.id)) {
      throw PipelineError(fmt::format("pool and queries share id '{}'", p.id));
    }
  }

  const bool trainable = std::all_of(data.classes.begin(), data.classes.end(), [&](auto l) {
    return pool_counts[LabelIndex(l)] >= 2;
  });
  if (trainable) {
    std::vector<LabeledFeatures> train;
    for (const auto& p : data.pool) train.push_back(p.data);
    data.model = TrainCentroids(train, "pool", data.classes);
  }
  return data;
}

std::string EvalConfigToJson(const EvalConfig& cfg) {
  json doc = {{"dataset_manifest", cfg.dataset_manifest},
              {"pool_manifest", cfg.pool_manifest},
              {"bins", cfg.bins},
              {"provider", cfg.provider},
              {"k", cfg.k},
              {"strategy", StrategyName(cfg.strategy)},
              {"include_unknown", cfg.include_unknown},
              {"mock_policy", cfg.mock_policy},
              {"seed", cfg.seed},
              {"per_class", cfg.per_class},
              {"pool_per_class", cfg.pool_per_class},
              {"snr_min", cfg.snr_min},
              {"snr_max", cfg.snr_max},
              {"snr_steps", cfg.snr_steps},
              {"n_symbols", cfg.n_symbols},
              {"sps", cfg.sps}};
  return doc.dump();
}

std::unique_ptr<Classifier> MakeClassifier(const EvalConfig& cfg, const EvalData& data,
                                           const EndpointConfig& endpoint) {
  if (cfg.mock_policy.empty()) return std::make_unique<LiveClassifier>(endpoint);
  const MockPolicy policy = ParseMockPolicy(cfg.mock_policy);
  if (policy.kind == MockPolicy::Kind::kCentroid && !data.model) {
    throw PipelineError("centroid mock policy needs >= 2 pool samples per class");
  }
  return std::make_unique<MockClassifier>(policy, data.model ? &*data.model : nullptr);
}

QueryPromptBuilder::QueryPromptBuilder(const EvalConfig& cfg, const EvalData& data,
                                       const BinningScheme* scheme,
                                       const ShortlistProvider* provider)
    : cfg_(cfg), data_(data), scheme_(scheme), provider_(provider) {
  cfg.Validate();
  if (cfg.k > static_cast<int>(data.classes.size())) {
    throw ArgumentError(fmt::format("k={} exceeds the {} classes in the dataset", cfg.k,
                                    data.classes.size()));
  }
  model_ = data.model ? &*data.model : nullptr;
  if (cfg.strategy == ExemplarStrategy::kCentroid && model_ == nullptr) {
    throw PipelineError("centroid exemplar selection needs >= 2 pool samples per class");
  }
  if (scheme_ == nullptr) {
    std::vector<FeatureVector> corpus;
    corpus.reserve(data.pool.size());
    for (const auto& p : data.pool) corpus.push_back(p.data.features);
    own_scheme_ = Calibrate(corpus, cfg.bins, cfg.snr_min, cfg.snr_max);
    scheme_ = &*own_scheme_;
  }
  if (provider_ == nullptr) {
    own_provider_ = MakeShortlistProvider(cfg.provider, model_, data.classes);
    provider_ = own_provider_.get();
  }
  pool_.reserve(data.pool.size());
  std::set<ModulationLabel> pool_classes;
  for (const auto& p : data.pool) {
    pool_.push_back({p.id, p.data.features, Quantize(p.data.features, *scheme_), p.data.label,
                     p.data.features.snr_db});
    pool_classes.insert(p.data.label);
  }
  baseline_possible_ = pool_classes.size() == static_cast<size_t>(kNumLabels);
}

QueryPromptBuilder::Built QueryPromptBuilder::Build(size_t index) const {
  const Query& q = data_.queries.at(index);
  const FeatureVector& fv = q.data.features;
  const SymbolicFeatures sym = Quantize(fv, *scheme_);
  const ShortlistQuery sq{q.id, &fv, q.data.label,
                          ShortlistSeed(cfg_.seed, index)};
  Built built;
  built.shortlist = provider_->Candidates(sq, cfg_.k);
  const uint64_t ex_seed = DeriveSeed(DeriveSeed(cfg_.seed, kExemplarStream), index);
  const auto exemplars = SelectExemplars(pool_, built.shortlist, cfg_.strategy, ex_seed, model_);
  built.bundle = BuildPrompt(sym, exemplars, built.shortlist, {cfg_.include_unknown});
  if (baseline_possible_) {
    const Shortlist all_labels{{kAllLabels.begin(), kAllLabels.end()}};
    const auto full = SelectExemplars(pool_, all_labels, cfg_.strategy, ex_seed, model_);
    built.baseline_tokens = BuildBaselinePrompt(fv, full).estimated_tokens;
  }
  return built;
}

uint64_t ShortlistSeed(uint64_t master_seed, size_t index) {
  return DeriveSeed(DeriveSeed(master_seed, kShortlistStream), index);
}

size_t FindQuery(const EvalData& data, std::string_view id) {
  for (size_t i = 0; i < data.queries.size(); ++i) {
    if (data.queries[i].id == id) return i;
  }
  throw ArgumentError(fmt::format("no query with id '{}' (ids run {}..{})", id,
                                  data.queries.front().id, data.queries.back().id));
}

EvalReport RunEval(const EvalConfig& cfg, const EvalData& data, Classifier& classifier,
                   const BinningScheme* scheme, const ShortlistProvider* provider) {
  const auto start = std::chrono::steady_clock::now();
  const QueryPromptBuilder builder(cfg, data, scheme, provider);

  const size_t n = data.queries.size();
  std::vector<QueryRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < n && !failed; i = next.fetch_add(1)) {
      const Query& q = data.queries[i];
      try {
        const FeatureVector& fv = q.data.features;
        const auto [shortlist, bundle, baseline_tokens] = builder.Build(i);
        const ClassificationResult result = classifier.Classify(bundle, &fv);

        QueryRecord& r = records[i];
        r.id = q.id;
        r.label = q.data.label;
        r.snr_db = fv.snr_db;
        r.options = bundle.options;
        r.exemplar_ids = bundle.exemplar_ids;
        r.predicted = result.predicted;
        r.correct = result.predicted == Prediction::Of(q.data.label);
        r.tokens = bundle.estimated_tokens;
        const auto counts = StatisticsFieldCounts(bundle.text);
        r.statistics_fields_min = *std::min_element(counts.begin(), counts.end());
        r.statistics_fields_max = *std::max_element(counts.begin(), counts.end());
        r.attempts = result.attempt_count;
        r.latency_ms = result.latency_ms;
        r.raw_response = result.raw_response;
        if (baseline_tokens) r.baseline_tokens = *baseline_tokens;
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const int workers = WorkerCount(cfg, classifier, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
  }
  for (size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      spdlog::error("query {} failed", data.queries[i].id);
      RethrowForQuery(errors[i], data.queries[i].id);
    }
  }

  EvalReport report;
  report.seed = cfg.seed;
  report.template_version = std::string(kTemplateVersion);
  report.config_json = EvalConfigToJson(cfg);
  report.classifier = classifier.Name();
  report.total = static_cast<int>(n);

  std::map<double, SnrBucket> buckets;
  std::vector<int64_t> tokens, baseline;
  int hits = 0;
  for (const auto& r : records) {
    int column = kParseFailureColumn;
    switch (r.predicted.kind) {
      case Prediction::Kind::kLabel:
        column = LabelIndex(r.predicted.label);
        break;
      case Prediction::Kind::kUnknown:
        column = kUnknownColumn;
        ++report.unknown;
        break;
      case Prediction::Kind::kParseFailure:
        ++report.parse_failures;
        break;
    }
    ++report.confusion[LabelIndex(r.label)][column];
    if (r.correct) ++report.correct;
    const std::string truth(LabelName(r.label));
    if (std::find(r.options.begin(), r.options.end(), truth) != r.options.end()) ++hits;

    SnrBucket& b = buckets[SnrBucketCenter(r.snr_db)];
    b.snr_db = SnrBucketCenter(r.snr_db);
    ++b.total;
    if (r.correct) ++b.correct;
    tokens.push_back(r.tokens);
    if (r.baseline_tokens >= 0) baseline.push_back(r.baseline_tokens);
  }
  const double total = static_cast<double>(n);
  report.overall_accuracy = report.correct / total;
  report.parse_failure_rate = report.parse_failures / total;
  report.shortlist_hit_rate = hits / total;
  for (auto& [center, b] : buckets) {
    b.accuracy = static_cast<double>(b.correct) / b.total;
    report.per_snr.push_back(b);
  }
  report.tokens = Summarize(tokens);
  if (baseline.size() == n) {
    report.baseline_tokens = Summarize(baseline);
    report.token_ratio = report.tokens.mean / report.baseline_tokens->mean;
  }
  report.records = std::move(records);
  if (cfg.mock_policy.empty()) {
    report.wall_clock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  }
  return report;
}

EvalReport RunEval(const EvalConfig& cfg, const EndpointConfig& endpoint) {
  const EvalData data = PrepareEvalData(cfg);
  auto classifier = MakeClassifier(cfg, data, endpoint);
  return RunEval(cfg, data, *classifier);
}

std::vector<KPoint> AblateK(const EvalConfig& cfg, const EvalData& data,
                            Classifier& classifier, const std::vector<int>& k_values) {
  std::vector<KPoint> out;
  for (int k : k_values) {
    ValidateK(k);
    EvalConfig run = cfg;
    run.k = k;
    const EvalReport r = RunEval(run, data, classifier);
    out.push_back({k, r.overall_accuracy, r.tokens.mean});
  }
  return out;
}

std::vector<BinsPoint> AblateBins(const EvalConfig& cfg, const EvalData& data,
                                  Classifier& classifier,
                                  const std::vector<int>& bin_values) {
  std::vector<BinsPoint> out;
  for (int bins : bin_values) {
    EvalConfig run = cfg;
    run.bins = bins;
    const EvalReport r = RunEval(run, data, classifier);
    BinsPoint p{bins, r.overall_accuracy, r.tokens.mean, 0, 0};
    p.statistics_fields_min = r.records.front().statistics_fields_min;
    p.statistics_fields_max = r.records.front().statistics_fields_max;
    for (const auto& rec : r.records) {
      p.statistics_fields_min = std::min(p.statistics_fields_min, rec.statistics_fields_min);
      p.statistics_fields_max = std::max(p.statistics_fields_max, rec.statistics_fields_max);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<StrategyPoint> AblateStrategy(const EvalConfig& cfg, const EvalData& data,
                                          Classifier& classifier,
                                          const std::vector<ExemplarStrategy>& strategies) {
  std::vector<StrategyPoint> out;
  for (ExemplarStrategy s : strategies) {
    EvalConfig run = cfg;
    run.strategy = s;
    const EvalReport r = RunEval(run, data, classifier);
    out.push_back({s, r.overall_accuracy, r.tokens.mean, cfg.seed});
  }
  return out;
}

}  // namespace discamc
