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

#include "discamc/prompt.h"

#include <algorithm>
#include <limits>

#include "discamc/errors.h"
#include "discamc/prompt_template.h"
#include "discamc/random.h"
#include "fmt/format.h"

namespace discamc {
namespace {

void ReplaceAll(std::string& text, std::string_view key, std::string_view value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
}

std::string FillTemplate(std::string_view feature_format, std::string_view examples,
                         std::string_view query, std::string_view options) {
  std::string text(PromptTemplate());
  ReplaceAll(text, "{{FEATURE_FORMAT}}", feature_format);
  ReplaceAll(text, "{{EXAMPLES}}", examples);
  ReplaceAll(text, "{{QUERY_STATISTICS}}", query);
  ReplaceAll(text, "{{OPTIONS}}", options);
  return text;
}

std::string ExampleBlock(std::string_view statistics, std::string_view options,
                         ModulationLabel answer) {
  return fmt::format(
      "**Signal Statistics:** {}\n**Classification Options:** {}\n**Answer:** {}\n",
      statistics, options, LabelName(answer));
}

std::vector<const Exemplar*> MembersOf(const ExemplarPool& pool, ModulationLabel label) {
  std::vector<const Exemplar*> members;
  for (const auto& e : pool) {
    if (e.label == label) members.push_back(&e);
  }
  std::sort(members.begin(), members.end(),
            [](const Exemplar* a, const Exemplar* b) { return a->id < b->id; });
  return members;
}

}  // namespace

std::string_view PromptTemplate() { return internal::kPromptTemplateV1; }

std::string_view StrategyName(ExemplarStrategy s) {
  switch (s) {
    case ExemplarStrategy::kRandom:
      return "random";
    case ExemplarStrategy::kCentroid:
      return "centroid";
    case ExemplarStrategy::kLowSnr:
      return "low_snr";
  }
  return "?";
}

ExemplarStrategy ParseStrategy(std::string_view name) {
  if (name == "random") return ExemplarStrategy::kRandom;
  if (name == "centroid") return ExemplarStrategy::kCentroid;
  if (name == "low_snr") return ExemplarStrategy::kLowSnr;
  throw ArgumentError(fmt::format(
      "unknown exemplar strategy '{}' (expected random, centroid or low_snr)", name));
}

std::vector<Exemplar> SelectExemplars(const ExemplarPool& pool,
                                      const Shortlist& shortlist,
                                      ExemplarStrategy strategy, uint64_t seed,
                                      const CentroidModel* model) {
  if (strategy == ExemplarStrategy::kCentroid && model == nullptr) {
    throw ArgumentError("centroid exemplar selection needs a centroid model");
  }
  std::vector<Exemplar> out;
  out.reserve(shortlist.candidates.size());
  for (ModulationLabel label : shortlist.candidates) {
    const auto members = MembersOf(pool, label);
    if (members.empty()) {
      throw PipelineError(
          fmt::format("exemplar pool has no member of class {}", LabelName(label)));
    }
    const Exemplar* chosen = members.front();
    switch (strategy) {
      case ExemplarStrategy::kRandom: {
        Rng rng = MakeRng(DeriveSeed(seed, LabelIndex(label)));
        std::uniform_int_distribution<size_t> pick(0, members.size() - 1);
        chosen = members[pick(rng)];
        break;
      }
      case ExemplarStrategy::kCentroid: {
        double best = std::numeric_limits<double>::infinity();
        for (const Exemplar* e : members) {
          const double d = model->Distance(e->features, label);
          if (d < best) {
            best = d;
            chosen = e;
          }
        }
        break;
      }
      case ExemplarStrategy::kLowSnr: {
        for (const Exemplar* e : members) {
          if (e->snr_db < chosen->snr_db) chosen = e;
        }
        break;
      }
    }
    out.push_back(*chosen);
  }
  return out;
}

int64_t EstimateTokens(std::string_view text) {
  int64_t words = 0;
  bool in_word = false;
  for (char ch : text) {
    const bool space = ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r' ||
                       ch == '\f' || ch == '\v';
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  const auto bytes = static_cast<int64_t>(text.size());
  return std::max(words, (bytes + 3) / 4);
}

std::string RenderOptions(std::span<const std::string> options) {
  std::string out = "[";
  for (size_t i = 0; i < options.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt::format("'{}'", options[i]);
  }
  out += "]";
  return out;
}

PromptBundle BuildPrompt(const SymbolicFeatures& query,
                         std::span<const Exemplar> exemplars,
                         const Shortlist& shortlist, PromptFlags flags,
                         const TokenCounter& counter) {
  if (shortlist.candidates.empty()) throw PipelineError("prompt needs at least one option");
  if (exemplars.size() != shortlist.candidates.size()) {
    throw PipelineError(fmt::format("prompt has {} exemplars for {} options",
                                    exemplars.size(), shortlist.candidates.size()));
  }
  PromptBundle bundle;
  bundle.template_version = std::string(kTemplateVersion);
  for (size_t i = 0; i < exemplars.size(); ++i) {
    if (exemplars[i].label != shortlist.candidates[i]) {
      throw PipelineError(fmt::format("exemplar {} is {} but option {} is {}",
                                      exemplars[i].id, LabelName(exemplars[i].label), i,
                                      LabelName(shortlist.candidates[i])));
    }
    bundle.options.emplace_back(LabelName(shortlist.candidates[i]));
    bundle.exemplar_ids.push_back(exemplars[i].id);
  }
  if (flags.include_unknown) bundle.options.emplace_back(kUnknownOption);

  const std::string options = RenderOptions(bundle.options);
  std::string examples;
  for (size_t i = 0; i < exemplars.size(); ++i) {
    if (i > 0) examples += '\n';
    examples += ExampleBlock(exemplars[i].symbolic.Render(), options, exemplars[i].label);
  }
  const std::string format =
      "Each statistic is written as a single letter: its bin among equal-frequency "
      "bins of a reference set of signals, with A the lowest. The snr field uses "
      "equal-width bins over the SNR range, also with A the lowest.";
  bundle.text = FillTemplate(format, examples, query.Render(), options);
  bundle.estimated_tokens = counter(bundle.text);
  return bundle;
}

std::string RenderRawFeatures(const FeatureVector& fv) {
  std::string out;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (i > 0) out += ", ";
    out += fmt::format("{}: {}", FeatureName(i), fv.values[i]);
  }
  return out;
}

std::vector<int> StatisticsFieldCounts(std::string_view prompt_text) {
  constexpr std::string_view kPrefix = "**Signal Statistics:** ";
  std::vector<int> counts;
  size_t pos = 0;
  while ((pos = prompt_text.find(kPrefix, pos)) != std::string_view::npos) {
    pos += kPrefix.size();
    const size_t eol = prompt_text.find('\n', pos);
    const std::string_view line = prompt_text.substr(pos, eol - pos);
    int fields = line.empty() ? 0 : 1;
    for (size_t c = line.find(", "); c != std::string_view::npos; c = line.find(", ", c + 2)) {
      ++fields;
    }
    counts.push_back(fields);
  }
  return counts;
}

PromptBundle BuildBaselinePrompt(const FeatureVector& query,
                                 std::span<const Exemplar> exemplars,
                                 const TokenCounter& counter) {
  if (exemplars.size() != static_cast<size_t>(kNumLabels)) {
    throw PipelineError(fmt::format("baseline prompt needs {} exemplars, got {}",
                                    kNumLabels, exemplars.size()));
  }
  PromptBundle bundle;
  bundle.template_version = std::string(kBaselineTemplateVersion);
  for (int i = 0; i < kNumLabels; ++i) {
    if (exemplars[i].label != kAllLabels[i]) {
      throw PipelineError(fmt::format("baseline exemplar {} is {}, expected {}", i,
                                      LabelName(exemplars[i].label),
                                      LabelName(kAllLabels[i])));
    }
    bundle.options.emplace_back(LabelName(kAllLabels[i]));
    bundle.exemplar_ids.push_back(exemplars[i].id);
  }
  const std::string options = RenderOptions(bundle.options);
  std::string examples;
  for (size_t i = 0; i < exemplars.size(); ++i) {
    if (i > 0) examples += '\n';
    examples += ExampleBlock(RenderRawFeatures(exemplars[i].features), options,
                             exemplars[i].label);
  }
  const std::string format = "Each statistic is written as its raw decimal value.";
  bundle.text = FillTemplate(format, examples, RenderRawFeatures(query), options);
  bundle.estimated_tokens = counter(bundle.text);
  return bundle;
}

}  // namespace discamc
