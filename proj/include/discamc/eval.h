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

#ifndef DISCAMC_EVAL_H_
#define DISCAMC_EVAL_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/binning.h"
#include "discamc/dataset.h"
#include "discamc/features.h"
#include "discamc/llm_client.h"
#include "discamc/prompt.h"
#include "discamc/shortlist.h"

namespace discamc {

// Everything one evaluation run depends on. When a manifest path is empty
// the corresponding dataset is synthesized from `seed` with the protocol
// fields below (queries and pool use different derived seeds).
struct EvalConfig {
  std::string dataset_manifest;
  std::string pool_manifest;
  int bins = 5;
  std::string provider = "centroid";  // centroid | oracle | file:PATH
  int k = 5;
  ExemplarStrategy strategy = ExemplarStrategy::kLowSnr;
  bool include_unknown = false;
  // Empty selects the live endpoint; otherwise a MockPolicy string.
  std::string mock_policy = "centroid";
  uint64_t seed = 0;

  int per_class = 20;
  int pool_per_class = 20;
  double snr_min = -10.0;
  double snr_max = 10.0;
  int snr_steps = 5;
  int n_symbols = kDefaultSymbols;
  int sps = kDefaultSps;

  // 0 = one worker per hardware thread (mock) or max_in_flight (live).
  int workers = 0;

  void Validate() const;
};

struct Query {
  std::string id;
  LabeledFeatures data;
};

// Features of the queries and the exemplar pool, computed once and shared
// by every run of an ablation.
struct EvalData {
  std::vector<Query> queries;
  std::vector<Query> pool;
  // Distinct query labels in label order.
  std::vector<ModulationLabel> classes;
  // Trained on the pool over `classes`.
  std::optional<CentroidModel> model;
};

// Loads or synthesizes both datasets and extracts features. Throws
// PipelineError if the pool misses a query class or shares an id with the
// queries.
EvalData PrepareEvalData(const EvalConfig& cfg);

struct QueryRecord {
  std::string id;
  ModulationLabel label = ModulationLabel::k4Ask;
  double snr_db = kNoiselessSnr;
  std::vector<std::string> options;
  std::vector<std::string> exemplar_ids;
  Prediction predicted;
  bool correct = false;
  int64_t tokens = 0;
  int64_t baseline_tokens = -1;  // -1 when the pool lacks some class
  int statistics_fields_min = 0;
  int statistics_fields_max = 0;
  int attempts = 0;
  int64_t latency_ms = 0;
  std::string raw_response;

  bool operator==(const QueryRecord&) const = default;
};

struct TokenStats {
  double mean = 0;
  int64_t min = 0;
  int64_t max = 0;
  bool operator==(const TokenStats&) const = default;
};

struct SnrBucket {
  double snr_db = 0;  // bucket center (multiple of 5 dB); +inf for noiseless
  int total = 0;
  int correct = 0;
  double accuracy = 0;
  bool operator==(const SnrBucket&) const = default;
};

// Confusion columns: the ten labels, then UNKNOWN, then parse failures.
inline constexpr int kConfusionColumns = kNumLabels + 2;
inline constexpr int kUnknownColumn = kNumLabels;
inline constexpr int kParseFailureColumn = kNumLabels + 1;

struct EvalReport {
  uint64_t seed = 0;
  std::string template_version;
  std::string config_json;  // compact JSON echo of EvalConfig
  std::string classifier;

  int total = 0;
  int correct = 0;
  int parse_failures = 0;
  int unknown = 0;
  double overall_accuracy = 0;
  double parse_failure_rate = 0;
  // Fraction of queries whose true label was among the prompt options.
  double shortlist_hit_rate = 0;

  std::vector<SnrBucket> per_snr;
  std::array<std::array<int, kConfusionColumns>, kNumLabels> confusion{};
  TokenStats tokens;
  std::optional<TokenStats> baseline_tokens;
  std::optional<double> token_ratio;  // mean tokens / mean baseline tokens

  std::vector<QueryRecord> records;
  // Omitted in mock mode so that replays are byte-identical.
  std::optional<int64_t> wall_clock_ms;

  bool operator==(const EvalReport&) const = default;
};

std::string EvalConfigToJson(const EvalConfig& cfg);

// Builds the classifier named by cfg.mock_policy (or a live client).
std::unique_ptr<Classifier> MakeClassifier(const EvalConfig& cfg, const EvalData& data,
                                           const EndpointConfig& endpoint);

// Runs feature quantization, shortlisting, exemplar selection, prompt
// assembly and classification for every query. `scheme` overrides the
// scheme calibrated on the pool with cfg.bins.
// Builds the prompt for one query exactly as RunEval does. The scheme is
// calibrated on the pool and the provider built from cfg unless supplied.
class QueryPromptBuilder {
 public:
  QueryPromptBuilder(const EvalConfig& cfg, const EvalData& data,
                     const BinningScheme* scheme = nullptr,
                     const ShortlistProvider* provider = nullptr);

  struct Built {
    Shortlist shortlist;
    PromptBundle bundle;
    std::optional<int64_t> baseline_tokens;  // set when the pool covers all classes
  };
  Built Build(size_t index) const;

  const BinningScheme& scheme() const { return *scheme_; }

 private:
  const EvalConfig& cfg_;
  const EvalData& data_;
  const CentroidModel* model_ = nullptr;
  std::optional<BinningScheme> own_scheme_;
  const BinningScheme* scheme_ = nullptr;
  std::unique_ptr<ShortlistProvider> own_provider_;
  const ShortlistProvider* provider_ = nullptr;
  ExemplarPool pool_;
  bool baseline_possible_ = false;
};

// Seed handed to the shortlist provider for query `index`.
uint64_t ShortlistSeed(uint64_t master_seed, size_t index);

// Index of the query with the given id; ArgumentError when absent.
size_t FindQuery(const EvalData& data, std::string_view id);

EvalReport RunEval(const EvalConfig& cfg, const EvalData& data, Classifier& classifier,
                   const BinningScheme* scheme = nullptr,
                   const ShortlistProvider* provider = nullptr);

// Prepares data, builds the classifier and runs.
EvalReport RunEval(const EvalConfig& cfg, const EndpointConfig& endpoint = {});

struct KPoint {
  int k = 0;
  double accuracy = 0;
  double mean_tokens = 0;
};
std::vector<KPoint> AblateK(const EvalConfig& cfg, const EvalData& data,
                            Classifier& classifier, const std::vector<int>& k_values);

struct BinsPoint {
  int bins = 0;
  double accuracy = 0;
  double mean_tokens = 0;
  int statistics_fields_min = 0;
  int statistics_fields_max = 0;
};
std::vector<BinsPoint> AblateBins(const EvalConfig& cfg, const EvalData& data,
                                  Classifier& classifier,
                                  const std::vector<int>& bin_values);

struct StrategyPoint {
  ExemplarStrategy strategy = ExemplarStrategy::kLowSnr;
  double accuracy = 0;
  double mean_tokens = 0;
  uint64_t seed = 0;
};
std::vector<StrategyPoint> AblateStrategy(const EvalConfig& cfg, const EvalData& data,
                                          Classifier& classifier,
                                          const std::vector<ExemplarStrategy>& strategies);

}  // namespace discamc

#endif  // DISCAMC_EVAL_H_
