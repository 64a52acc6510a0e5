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

#include "discamc/binning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "discamc/errors.h"
#include "discamc/random.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace discamc {
namespace {

// Corpus whose retained feature j equals values[i] * (j + 1).
std::vector<FeatureVector> CorpusFrom(const std::vector<double>& values) {
  std::vector<FeatureVector> corpus;
  for (double v : values) {
    FeatureVector fv;
    for (int j = 0; j < kNumRetainedFeatures; ++j) {
      fv.values[kFirstRetainedFeature + j] = v * (j + 1);
    }
    fv.snr_db = 0;
    corpus.push_back(fv);
  }
  return corpus;
}

std::vector<double> UniformValues(int n, uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<FeatureVector> SyntheticCorpus(int per_class) {
  std::vector<FeatureVector> corpus;
  uint64_t seed = 0;
  for (ModulationLabel l : kAllLabels) {
    for (int i = 0; i < per_class; ++i) {
      ++seed;
      corpus.push_back(
          ExtractFeatures(AddAwgn(Modulate(l, 64, 4, seed), -10 + i % 5 * 5, seed + 1000)));
    }
  }
  return corpus;
}

TEST(CalibrateTest, EqualFrequencyOnDistinctValues) {
  const auto corpus = CorpusFrom(UniformValues(100, 3));
  const BinningScheme scheme = Calibrate(corpus, 5);
  for (int j = 0; j < kNumRetainedFeatures; ++j) {
    std::array<int, 5> counts{};
    for (const auto& fv : corpus) {
      ++counts[BinIndex(fv.values[kFirstRetainedFeature + j], scheme.edges[j])];
    }
    for (int c : counts) EXPECT_EQ(c, 20) << "feature " << j;
  }
}

TEST(CalibrateTest, RejectsBadBinCounts) {
  const auto corpus = CorpusFrom(UniformValues(300, 1));
  EXPECT_THROW(Calibrate(corpus, 1), ArgumentError);
  EXPECT_THROW(Calibrate(corpus, 27), ArgumentError);
  EXPECT_THROW(Calibrate(CorpusFrom(UniformValues(49, 1)), 5), PipelineError);
}

TEST(CalibrateTest, TwoBinsOnSymmetricDataSplitsAtMedian) {
  std::vector<double> values;
  for (int i = -50; i <= 50; ++i) values.push_back(i);
  const BinningScheme scheme = Calibrate(CorpusFrom(values), 2);
  ASSERT_EQ(scheme.edges[0].size(), 1u);
  EXPECT_EQ(scheme.edges[0][0], 0.0);
}

TEST(CalibrateTest, SerializeReloadGivesIdenticalQuantization) {
  testing::TempDir dir;
  const auto corpus = SyntheticCorpus(20);
  const BinningScheme scheme = Calibrate(corpus, 7, -12, 12);
  WriteScheme(dir / "s.json", scheme);
  const BinningScheme back = ReadScheme(dir / "s.json");
  EXPECT_EQ(back, scheme);
  for (const auto& fv : corpus) EXPECT_EQ(Quantize(fv, back), Quantize(fv, scheme));
  EXPECT_EQ(SchemeToJson(back), SchemeToJson(scheme));
}

TEST(CalibrateTest, MalformedSchemeRejected) {
  EXPECT_THROW(SchemeFromJson("{}"), FormatError);
  EXPECT_THROW(SchemeFromJson("[1,2"), FormatError);
}

TEST(QuantizeTest, SeventeenTokensSnrFirst) {
  const auto corpus = SyntheticCorpus(20);
  const BinningScheme scheme = Calibrate(corpus, 5);
  const SymbolicFeatures sym = Quantize(corpus[3], scheme);
  EXPECT_EQ(sym.fields.size(), 17u);
  EXPECT_EQ(sym.fields[0].name, "snr");
  EXPECT_EQ(sym.fields[1].name, "skewness");
  const std::string text = sym.Render();
  EXPECT_EQ(text.rfind("snr: ", 0), 0u);
  EXPECT_EQ(text.substr(6, 12), ", skewness: ");
  EXPECT_EQ(std::count(text.begin(), text.end(), ':'), 17);
}

TEST(QuantizeTest, CorpusExtremesMapToFirstAndLastLetter) {
  const auto corpus = CorpusFrom(UniformValues(200, 8));
  const BinningScheme scheme = Calibrate(corpus, 5);
  const auto [lo, hi] = std::minmax_element(corpus.begin(), corpus.end(), [](auto& a, auto& b) {
    return a.values[kFirstRetainedFeature] < b.values[kFirstRetainedFeature];
  });
  for (int j = 1; j < kNumSymbolicFields; ++j) {
    EXPECT_EQ(Quantize(*lo, scheme).fields[j].token, 'A');
    EXPECT_EQ(Quantize(*hi, scheme).fields[j].token, 'E');
  }
}

TEST(QuantizeTest, TiesGoToLowerBin) {
  const std::vector<double> edges = {1.0, 2.0, 3.0};
  EXPECT_EQ(BinIndex(0.5, edges), 0);
  EXPECT_EQ(BinIndex(1.0, edges), 0);
  EXPECT_EQ(BinIndex(1.0000001, edges), 1);
  EXPECT_EQ(BinIndex(3.0, edges), 2);
  EXPECT_EQ(BinIndex(3.5, edges), 3);
  EXPECT_EQ(BinToken(0), 'A');
  EXPECT_EQ(BinToken(25), 'Z');
}

TEST(QuantizeTest, MonotoneTokenMapping) {
  const auto corpus = SyntheticCorpus(20);
  const BinningScheme scheme = Calibrate(corpus, 6);
  Rng rng = MakeRng(4);
  for (int j = 0; j < kNumRetainedFeatures; ++j) {
    const auto& e = scheme.edges[j];
    std::uniform_real_distribution<double> u(e.front() - 1, e.back() + 1);
    std::vector<double> vs(500);
    for (auto& v : vs) v = u(rng);
    vs.insert(vs.end(), e.begin(), e.end());
    std::sort(vs.begin(), vs.end());
    for (size_t i = 1; i < vs.size(); ++i) {
      ASSERT_LE(BinIndex(vs[i - 1], e), BinIndex(vs[i], e)) << "feature " << j;
    }
  }
}

TEST(QuantizeTest, TotalOnFiniteValuesAndNamesNaN) {
  const auto corpus = SyntheticCorpus(20);
  const BinningScheme scheme = Calibrate(corpus, 5);
  FeatureVector fv = corpus[0];
  for (double v : {-std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min(), 0.0}) {
    for (int j = kFirstRetainedFeature; j < kNumFeatures; ++j) fv.values[j] = v;
    const SymbolicFeatures sym = Quantize(fv, scheme);
    for (const auto& f : sym.fields) EXPECT_TRUE(f.token >= 'A' && f.token <= 'E');
  }
  fv = corpus[0];
  fv[Feature::kC63] = std::nan("");
  try {
    Quantize(fv, scheme);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_NE(std::string(e.what()).find("c63"), std::string::npos) << e.what();
  }
}

TEST(QuantizeTest, EqualFrequencyWithinTieSlackOnRealCorpus) {
  const auto corpus = SyntheticCorpus(20);
  for (int bins : {3, 5, 10, 20}) {
    const BinningScheme scheme = Calibrate(corpus, bins);
    const int n = static_cast<int>(corpus.size());
    for (int j = 0; j < kNumRetainedFeatures; ++j) {
      std::vector<int> counts(bins, 0);
      int tied = 0;
      for (const auto& fv : corpus) {
        const double v = fv.values[kFirstRetainedFeature + j];
        ++counts[BinIndex(v, scheme.edges[j])];
        if (std::find(scheme.edges[j].begin(), scheme.edges[j].end(), v) != scheme.edges[j].end()) {
          ++tied;
        }
      }
      // An edge is itself a corpus value, so one value per edge sits on it
      // even without duplicates.
      const int slack = std::max(0, tied - (bins - 1));
      const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
      EXPECT_LE(*mx - *mn, 1 + slack) << "B=" << bins << " feature " << j;
      int total = 0;
      for (int c : counts) total += c;
      EXPECT_EQ(total, n);
    }
  }
}

TEST(SnrBinTest, UniformBinsOverRange) {
  BinningScheme scheme;
  scheme.bins = 5;
  EXPECT_EQ(SnrBin(10, scheme), 'E');
  EXPECT_EQ(SnrBin(-10, scheme), 'A');
  EXPECT_EQ(SnrBin(0, scheme), 'C');
  EXPECT_EQ(SnrBin(-6, scheme), 'A');
  EXPECT_EQ(SnrBin(-5.9, scheme), 'B');
  EXPECT_EQ(SnrBin(-40, scheme), 'A');
  EXPECT_EQ(SnrBin(40, scheme), 'E');
  EXPECT_EQ(SnrBin(kNoiselessSnr, scheme), 'E');
}

TEST(SymbolicCsvTest, WritesLabelAndSeventeenTokens) {
  testing::TempDir dir;
  const auto corpus = SyntheticCorpus(20);
  const BinningScheme scheme = Calibrate(corpus, 5);
  std::vector<LabeledFeatures> rows = {{corpus[0], ModulationLabel::k4Ask},
                                       {corpus[25], ModulationLabel::k4Pam}};
  WriteSymbolicCsv(dir / "s.csv", rows, scheme);
  const std::string text = testing::ReadFile(dir / "s.csv");
  const std::string header = text.substr(0, text.find('\n'));
  EXPECT_EQ(header.rfind("label,snr,skewness,", 0), 0u) << header;
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 17);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace discamc
