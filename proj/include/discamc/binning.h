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

#ifndef DISCAMC_BINNING_H_
#define DISCAMC_BINNING_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/features.h"

namespace discamc {

inline constexpr int kMinBins = 2;
inline constexpr int kMaxBins = 26;
// Calibration needs at least this many corpus vectors per bin.
inline constexpr int kMinCorpusPerBin = 10;
inline constexpr int kNumSymbolicFields = 1 + kNumRetainedFeatures;
static_assert(kNumSymbolicFields == 17);

inline constexpr double kDefaultSnrLo = -10.0;
inline constexpr double kDefaultSnrHi = 10.0;

// Per-feature quantile edges for the 16 retained statistics plus a uniform
// SNR grid. Bin i is rendered as the letter 'A' + i. A value equal to an
// edge falls in the lower bin.
struct BinningScheme {
  int bins = 0;
  std::array<std::vector<double>, kNumRetainedFeatures> edges;
  double snr_lo = kDefaultSnrLo;
  double snr_hi = kDefaultSnrHi;

  std::string Alphabet() const;
  bool operator==(const BinningScheme&) const = default;
};

// Equal-frequency calibration: the edge for quantile i/B is the
// ceil(i*N/B)-th smallest corpus value (i = 1..B-1). Requires
// 2 <= bins <= 26 and corpus.size() >= 10 * bins.
BinningScheme Calibrate(std::span<const FeatureVector> corpus, int bins,
                        double snr_lo = kDefaultSnrLo,
                        double snr_hi = kDefaultSnrHi);

// Number of edges strictly below `value`, i.e. the 0-based bin index.
int BinIndex(double value, std::span<const double> edges);

char BinToken(int index);

// Uniform bins over [snr_lo, snr_hi]; out-of-range values (including
// +inf for noiseless segments) clamp to the end bins.
char SnrBin(double snr_db, const BinningScheme& scheme);

struct SymbolicField {
  std::string_view name;
  char token;
  bool operator==(const SymbolicField&) const = default;
};

// snr first, then skewness, kurtosis, c20 ... c80_norm.
struct SymbolicFeatures {
  std::array<SymbolicField, kNumSymbolicFields> fields;

  // "snr: C, skewness: B, kurtosis: A, ..."
  std::string Render() const;
  bool operator==(const SymbolicFeatures&) const = default;
};

const std::array<std::string_view, kNumSymbolicFields>& SymbolicFieldNames();

SymbolicFeatures Quantize(const FeatureVector& fv, const BinningScheme& scheme);

void WriteScheme(const std::filesystem::path& path, const BinningScheme& scheme);
BinningScheme ReadScheme(const std::filesystem::path& path);
std::string SchemeToJson(const BinningScheme& scheme);
BinningScheme SchemeFromJson(std::string_view text);

// label + 17 token columns.
void WriteSymbolicCsv(const std::filesystem::path& path,
                      const std::vector<LabeledFeatures>& rows,
                      const BinningScheme& scheme);

}  // namespace discamc

#endif  // DISCAMC_BINNING_H_
