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

#include "discamc/modulation.h"

#include <cmath>
#include <set>

#include "discamc/errors.h"
#include "gtest/gtest.h"

namespace discamc {
namespace {

double NoisePower(const IQSegment& clean, const IQSegment& noisy) {
  double sum = 0;
  for (size_t i = 0; i < clean.n(); ++i) {
    sum += std::norm(std::complex<double>(noisy.samples[i]) -
                     std::complex<double>(clean.samples[i]));
  }
  return sum / static_cast<double>(clean.n());
}

TEST(LabelTest, NamesRoundTrip) {
  std::set<std::string_view> names;
  for (ModulationLabel l : kAllLabels) {
    names.insert(LabelName(l));
    EXPECT_EQ(ParseLabel(LabelName(l)), l);
    EXPECT_EQ(LabelFromString(LabelName(l)), l);
  }
  EXPECT_EQ(names.size(), 10u);
  EXPECT_FALSE(ParseLabel("QAM64").has_value());
  EXPECT_THROW(LabelFromString("QAM64"), ArgumentError);
}

TEST(ModulateTest, OokHasTwoLevelsOneZero) {
  const IQSegment seg = Modulate(ModulationLabel::kOok, 256, 8, 17);
  std::set<float> levels;
  for (const Sample& s : seg.samples) levels.insert(std::abs(s));
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(*levels.begin(), 0.0f);
}

TEST(ModulateTest, FrequencyKeyedSchemesHaveConstantEnvelope) {
  for (ModulationLabel l :
       {ModulationLabel::kGmsk, ModulationLabel::kGfsk, ModulationLabel::kCpfsk}) {
    const IQSegment seg = Modulate(l, 256, 8, 5);
    double worst = 0;
    for (const Sample& s : seg.samples) worst = std::max(worst, std::abs(std::abs(s) - 1.0));
    EXPECT_LT(worst, 1e-6) << LabelName(l);
  }
}

TEST(ModulateTest, FourAskMeanPowerNearOne) {
  const IQSegment seg = Modulate(ModulationLabel::k4Ask, 4096, 1, 8);
  EXPECT_NEAR(MeanPower(seg.samples), 1.0, 0.05);
}

TEST(ModulateTest, ShapeAndMetadata) {
  for (ModulationLabel l : kAllLabels) {
    const IQSegment seg = Modulate(l, 100, 4, 1);
    EXPECT_EQ(seg.n(), 400u) << LabelName(l);
    EXPECT_EQ(seg.label, l);
    EXPECT_EQ(seg.sps, 4);
    EXPECT_TRUE(std::isinf(seg.snr_db));
  }
}

TEST(ModulateTest, DeterministicForSeed) {
  for (ModulationLabel l : kAllLabels) {
    EXPECT_EQ(Modulate(l, 128, 8, 42).samples, Modulate(l, 128, 8, 42).samples);
    EXPECT_NE(Modulate(l, 128, 8, 42).samples, Modulate(l, 128, 8, 43).samples)
        << LabelName(l);
  }
}

TEST(ModulateTest, RejectsBadArguments) {
  EXPECT_THROW(Modulate(ModulationLabel::kOok, kMinSymbols - 1, 8, 0), ArgumentError);
  EXPECT_THROW(Modulate(ModulationLabel::kOok, 128, 0, 0), ArgumentError);
  EXPECT_THROW(Modulate(ModulationLabel::kOok, 128, kMaxSps + 1, 0), ArgumentError);
}

TEST(AwgnTest, InfiniteSnrLeavesSamplesUntouched) {
  const IQSegment seg = Modulate(ModulationLabel::k8Ask, 128, 8, 2);
  const IQSegment out = AddAwgn(seg, kNoiselessSnr, 3);
  EXPECT_EQ(out.samples, seg.samples);
  EXPECT_TRUE(std::isinf(out.snr_db));
}

TEST(AwgnTest, NoisePowerMatchesRequest) {
  // GMSK is unit power sample by sample.
  const IQSegment seg = Modulate(ModulationLabel::kGmsk, 2048, 8, 6);
  ASSERT_EQ(seg.n(), 16384u);
  ASSERT_NEAR(MeanPower(seg.samples), 1.0, 1e-6);
  EXPECT_NEAR(NoisePower(seg, AddAwgn(seg, 0.0, 10)), 1.0, 0.02);
  EXPECT_NEAR(NoisePower(seg, AddAwgn(seg, -10.0, 11)), 10.0, 0.2);
}

TEST(AwgnTest, MeasuredSnrWithinTwoTenthsDbForEveryLabel) {
  for (ModulationLabel l : kAllLabels) {
    const IQSegment seg = Modulate(l, 2048, 8, 20 + LabelIndex(l));
    for (double snr : {-10.0, 0.0, 10.0}) {
      const IQSegment noisy = AddAwgn(seg, snr, 7);
      const double measured = 10 * std::log10(MeanPower(seg.samples) / NoisePower(seg, noisy));
      EXPECT_NEAR(measured, snr, 0.2) << LabelName(l) << " @ " << snr;
    }
  }
}

TEST(AwgnTest, PreservesMetadataAndIsDeterministic) {
  const IQSegment seg = Modulate(ModulationLabel::kDqpsk, 128, 2, 9);
  const IQSegment a = AddAwgn(seg, 3.5, 1), b = AddAwgn(seg, 3.5, 1);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.label, seg.label);
  EXPECT_EQ(a.sps, seg.sps);
  EXPECT_EQ(a.snr_db, 3.5);
  EXPECT_THROW(AddAwgn(seg, std::nan(""), 1), ArgumentError);
  EXPECT_THROW(AddAwgn(IQSegment{}, 0.0, 1), ArgumentError);
}

}  // namespace
}  // namespace discamc
