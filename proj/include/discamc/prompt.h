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

#ifndef DISCAMC_PROMPT_H_
#define DISCAMC_PROMPT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/binning.h"
#include "discamc/features.h"
#include "discamc/shortlist.h"

namespace discamc {

inline constexpr std::string_view kTemplateVersion = "disc-v1";
inline constexpr std::string_view kBaselineTemplateVersion = "baseline-v1";
inline constexpr std::string_view kUnknownOption = "UNKNOWN";

// Raw template text with {{FEATURE_FORMAT}}, {{EXAMPLES}},
// {{QUERY_STATISTICS}} and {{OPTIONS}} placeholders.
std::string_view PromptTemplate();

struct Exemplar {
  std::string id;
  FeatureVector features;
  SymbolicFeatures symbolic;
  ModulationLabel label = ModulationLabel::k4Ask;
  double snr_db = kNoiselessSnr;
};

using ExemplarPool = std::vector<Exemplar>;

enum class ExemplarStrategy { kRandom, kCentroid, kLowSnr };

std::string_view StrategyName(ExemplarStrategy s);
ExemplarStrategy ParseStrategy(std::string_view name);

// One exemplar per shortlist candidate, in shortlist order.
//   random   - uniform pick per class from a stream seeded by
//              DeriveSeed(seed, class index)
//   centroid - member closest to its own class centroid under `model`
//   low_snr  - member with the lowest snr_db
// Ties go to the smaller id. `model` is only read by the centroid strategy.
std::vector<Exemplar> SelectExemplars(const ExemplarPool& pool,
                                      const Shortlist& shortlist,
                                      ExemplarStrategy strategy, uint64_t seed,
                                      const CentroidModel* model = nullptr);

// Approximate token count: max(whitespace words, ceil(bytes / 4)).
int64_t EstimateTokens(std::string_view text);

using TokenCounter = std::function<int64_t(std::string_view)>;

struct PromptFlags {
  bool include_unknown = false;
};

struct PromptBundle {
  std::string text;
  std::vector<std::string> options;
  std::vector<std::string> exemplar_ids;
  int64_t estimated_tokens = 0;
  std::string template_version;
};

// "['GMSK', 'OOK']"
std::string RenderOptions(std::span<const std::string> options);

// Structured multiple-choice prompt. exemplars[i] must carry the label of
// shortlist.candidates[i].
PromptBundle BuildPrompt(const SymbolicFeatures& query,
                         std::span<const Exemplar> exemplars,
                         const Shortlist& shortlist, PromptFlags flags = {},
                         const TokenCounter& counter = EstimateTokens);

// Comparison prompt: all 21 statistics as full-precision decimals, all ten
// classes as options, one exemplar per class in label order.
PromptBundle BuildBaselinePrompt(const FeatureVector& query,
                                 std::span<const Exemplar> exemplars,
                                 const TokenCounter& counter = EstimateTokens);

// "nobs: 8192, min: 0.01, ..."
std::string RenderRawFeatures(const FeatureVector& fv);

// Number of "name: value" fields on each "**Signal Statistics:**" line of a
// prompt, in order of appearance (exemplars first, query last).
std::vector<int> StatisticsFieldCounts(std::string_view prompt_text);

}  // namespace discamc

#endif  // DISCAMC_PROMPT_H_
