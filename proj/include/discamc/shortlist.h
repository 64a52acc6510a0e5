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

#ifndef DISCAMC_SHORTLIST_H_
#define DISCAMC_SHORTLIST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/features.h"
#include "discamc/modulation.h"

namespace discamc {

// Candidate labels for one query, most probable first.
struct Shortlist {
  std::vector<ModulationLabel> candidates;

  int k() const { return static_cast<int>(candidates.size()); }
  bool Contains(ModulationLabel label) const;
  bool operator==(const Shortlist&) const = default;
};

void ValidateK(int k);

inline constexpr double kStddevFloor = 1e-9;

using RetainedArray = std::array<double, kNumRetainedFeatures>;

// Nearest-centroid model over the 16 retained statistics. Features are
// z-scored with pooled corpus statistics; centroids live in z-space.
struct CentroidModel {
  RetainedArray mean{};
  RetainedArray stddev{};
  std::array<RetainedArray, kNumLabels> centroids{};
  // Classes the model was trained on (all ten unless restricted); only
  // these are ranked.
  std::vector<ModulationLabel> classes{kAllLabels.begin(), kAllLabels.end()};
  std::string corpus_id;
  int64_t corpus_size = 0;

  RetainedArray ZScore(const FeatureVector& fv) const;
  // Squared Euclidean distance from fv to the class centroid in z-space.
  double Distance(const FeatureVector& fv, ModulationLabel label) const;

  bool operator==(const CentroidModel&) const = default;
};

// Needs at least two samples of every class in `classes` (default: all
// ten); rows of other classes are ignored. The result does not depend on
// the order of `train`.
CentroidModel TrainCentroids(std::span<const LabeledFeatures> train,
                             std::string corpus_id = "",
                             std::span<const ModulationLabel> classes = kAllLabels);

// The model's classes ordered by ascending distance; ties keep label order.
std::vector<ModulationLabel> RankByCentroid(const FeatureVector& fv,
                                            const CentroidModel& model);

Shortlist ShortlistByCentroid(const FeatureVector& fv, const CentroidModel& model,
                              int k);

// Fraction of `test` whose label is in the centroid shortlist of size k.
double TopKAccuracy(const CentroidModel& model,
                    std::span<const LabeledFeatures> test, int k);

// true_label at a seeded position among k-1 seeded distinct distractors
// drawn from `universe`.
Shortlist OracleShortlist(ModulationLabel true_label, int k, uint64_t seed,
                          std::span<const ModulationLabel> universe = kAllLabels);

// Shortlists keyed by query id, from a JSON object {"<id>": ["GMSK", ...]}.
std::map<std::string, Shortlist> ParseShortlists(std::string_view json_text);
std::map<std::string, Shortlist> ImportShortlists(const std::filesystem::path& path);

void WriteCentroidModel(const std::filesystem::path& path, const CentroidModel& model);
CentroidModel ReadCentroidModel(const std::filesystem::path& path);
std::string CentroidModelToJson(const CentroidModel& model);
CentroidModel CentroidModelFromJson(std::string_view text);

// What a provider may look at when shortlisting one query. The oracle
// provider is the only one that reads true_label.
struct ShortlistQuery {
  std::string id;
  const FeatureVector* features = nullptr;
  ModulationLabel true_label = ModulationLabel::k4Ask;
  uint64_t seed = 0;
};

class ShortlistProvider {
 public:
  virtual ~ShortlistProvider() = default;
  virtual Shortlist Candidates(const ShortlistQuery& query, int k) const = 0;
  virtual std::string Name() const = 0;
};

class CentroidProvider : public ShortlistProvider {
 public:
  explicit CentroidProvider(CentroidModel model) : model_(std::move(model)) {}
  Shortlist Candidates(const ShortlistQuery& query, int k) const override;
  std::string Name() const override { return "centroid"; }
  const CentroidModel& model() const { return model_; }

 private:
  CentroidModel model_;
};

class OracleProvider : public ShortlistProvider {
 public:
  explicit OracleProvider(std::vector<ModulationLabel> universe = {kAllLabels.begin(),
                                                                  kAllLabels.end()})
      : universe_(std::move(universe)) {}
  Shortlist Candidates(const ShortlistQuery& query, int k) const override;
  std::string Name() const override { return "oracle"; }

 private:
  std::vector<ModulationLabel> universe_;
};

// Serves externally produced shortlists. Returns the first k imported
// candidates (fewer if the file lists fewer); an id absent from the file
// is a PipelineError.
class FileProvider : public ShortlistProvider {
 public:
  FileProvider(std::map<std::string, Shortlist> shortlists, std::string source)
      : shortlists_(std::move(shortlists)), source_(std::move(source)) {}
  Shortlist Candidates(const ShortlistQuery& query, int k) const override;
  std::string Name() const override { return "file:" + source_; }

 private:
  std::map<std::string, Shortlist> shortlists_;
  std::string source_;
};

// "centroid", "oracle" or "file:PATH". `model` is required for centroid;
// `universe` is the oracle's distractor set.
std::unique_ptr<ShortlistProvider> MakeShortlistProvider(
    std::string_view spec, const CentroidModel* model,
    std::span<const ModulationLabel> universe = kAllLabels);

}  // namespace discamc

#endif  // DISCAMC_SHORTLIST_H_
