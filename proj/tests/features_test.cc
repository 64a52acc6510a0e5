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

#include "discamc/features.h"

#include <cmath>

#include "discamc/moments.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace discamc {
namespace {

TEST(FeatureVectorTest, HasExactly21NamedEntries) {
  EXPECT_EQ(std::tuple_size_v<decltype(FeatureVector::values)>, 21u);
  const auto& names = FeatureNames();
  ASSERT_EQ(names.size(), 21u);
  EXPECT_EQ(names.front(), "nobs");
  EXPECT_EQ(names[kFirstRetainedFeature], "skewness");
  EXPECT_EQ(names.back(), "c80_norm");
  EXPECT_EQ(FeatureName(Feature::kC42), "c42");
  EXPECT_EQ(FeatureVector{}.Retained().size(), 16u);
}

TEST(ExtractFeaturesTest, ZeroSegment) {
  IQSegment seg;
  seg.samples.assign(256, Sample(0, 0));
  const FeatureVector fv = ExtractFeatures(seg);
  EXPECT_EQ(fv[Feature::kNobs], 256);
  for (int i = static_cast<int>(Feature::kC20); i < kNumFeatures; ++i) {
    EXPECT_EQ(fv.values[i], 0.0) << FeatureName(i);
  }
}

TEST(ExtractFeaturesTest, DeterministicAndCarriesSnr) {
  const IQSegment seg = AddAwgn(Modulate(ModulationLabel::k16Pam, 256, 8, 4), 2.5, 9);
  const FeatureVector a = ExtractFeatures(seg), b = ExtractFeatures(seg);
  for (int i = 0; i < kNumFeatures; ++i) {
    EXPECT_EQ(std::bit_cast<uint64_t>(a.values[i]), std::bit_cast<uint64_t>(b.values[i]));
  }
  EXPECT_EQ(a.snr_db, 2.5);
}

TEST(ExtractFeaturesTest, ComposesStatsAndCumulantMagnitudes) {
  const IQSegment seg = AddAwgn(Modulate(ModulationLabel::kDqpsk, 256, 4, 4), 5, 1);
  const FeatureVector fv = ExtractFeatures(seg);
  const DescriptiveStats s = ComputeDescriptiveStats(seg.samples);
  const CumulantSet c = Cumulants(seg.samples);
  EXPECT_EQ(fv[Feature::kMean], s.mean);
  EXPECT_EQ(fv[Feature::kKurtosis], s.kurtosis);
  EXPECT_DOUBLE_EQ(fv[Feature::kC40], std::abs(c.c40));
  EXPECT_DOUBLE_EQ(fv[Feature::kC63], std::abs(c.c63));
  const double c21 = std::abs(c.c21);
  EXPECT_DOUBLE_EQ(fv[Feature::kC40Norm], std::abs(c.c40) / (c21 * c21));
  EXPECT_DOUBLE_EQ(fv[Feature::kC80Norm], std::abs(c.c80) / std::pow(c21, 4));
}

TEST(FeaturesCsvTest, RoundTrip) {
  testing::TempDir dir;
  std::vector<LabeledFeatures> rows;
  for (ModulationLabel l : {ModulationLabel::kOok, ModulationLabel::kGfsk}) {
    IQSegment seg = Modulate(l, 64, 2, 1);
    rows.push_back({ExtractFeatures(seg), l});
  }
  rows[1].features.snr_db = -7.5;
  WriteFeaturesCsv(dir / "f.csv", rows);
  const auto back = ReadFeaturesCsv(dir / "f.csv");
  ASSERT_EQ(back.size(), 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].label, rows[i].label);
    EXPECT_EQ(back[i].features, rows[i].features);
  }
  const std::string text = testing::ReadFile(dir / "f.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "nobs,min,max,mean,variance,skewness,kurtosis,c20,c21,c40,c41,c42,c60,c61,c62,"
            "c63,c80,c40_norm,c42_norm,c63_norm,c80_norm,label,snr_db");
}

}  // namespace
}  // namespace discamc
