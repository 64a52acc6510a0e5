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

#ifndef DISCAMC_FEATURES_H_
#define DISCAMC_FEATURES_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "discamc/modulation.h"

namespace discamc {

// Fixed order of the 21 statistics. The first seven describe the
// instantaneous amplitude |x[n]|; the rest are cumulant magnitudes and
// C21-normalized ratios.
enum class Feature : int {
  kNobs,
  kMin,
  kMax,
  kMean,
  kVariance,
  kSkewness,
  kKurtosis,
  kC20,
  kC21,
  kC40,
  kC41,
  kC42,
  kC60,
  kC61,
  kC62,
  kC63,
  kC80,
  kC40Norm,  // |C40| / C21^2
  kC42Norm,  // |C42| / C21^2
  kC63Norm,  // |C63| / C21^3
  kC80Norm,  // |C80| / C21^4
};

inline constexpr int kNumFeatures = 21;

// The five amplitude fields dropped from prompts (nobs, min, max, mean,
// variance) precede the retained ones, so the retained block is the
// contiguous tail starting at kSkewness.
inline constexpr int kFirstRetainedFeature = static_cast<int>(Feature::kSkewness);
inline constexpr int kNumRetainedFeatures = kNumFeatures - kFirstRetainedFeature;
static_assert(kNumRetainedFeatures == 16);

std::string_view FeatureName(int index);
inline std::string_view FeatureName(Feature f) {
  return FeatureName(static_cast<int>(f));
}
const std::array<std::string_view, kNumFeatures>& FeatureNames();

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  double snr_db = kNoiselessSnr;

  double operator[](Feature f) const { return values[static_cast<int>(f)]; }
  double& operator[](Feature f) { return values[static_cast<int>(f)]; }

  // The 16 statistics kept in symbolic prompts, in FeatureVector order.
  std::array<double, kNumRetainedFeatures> Retained() const;

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector ExtractFeatures(const IQSegment& seg);

struct LabeledFeatures {
  FeatureVector features;
  ModulationLabel label = ModulationLabel::k4Ask;
};

// CSV with a header row: the 21 feature names, then `label`, then `snr_db`
// ("inf" for noiseless segments). Values use shortest round-trip decimals.
void WriteFeaturesCsv(std::ostream& out, const std::vector<LabeledFeatures>& rows);
void WriteFeaturesCsv(const std::filesystem::path& path,
                      const std::vector<LabeledFeatures>& rows);
std::vector<LabeledFeatures> ReadFeaturesCsv(const std::filesystem::path& path);

}  // namespace discamc

#endif  // DISCAMC_FEATURES_H_
