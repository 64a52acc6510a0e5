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
#include <ostream>

#include "csv_util.h"
#include "discamc/errors.h"
#include "discamc/moments.h"
#include "fmt/format.h"

namespace discamc {
namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "nobs",     "min",      "max",      "mean",     "variance", "skewness",
    "kurtosis", "c20",      "c21",      "c40",      "c41",      "c42",
    "c60",      "c61",      "c62",      "c63",      "c80",      "c40_norm",
    "c42_norm", "c63_norm", "c80_norm",
};

double SafeRatio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

std::string_view FeatureName(int index) { return kFeatureNames.at(index); }

const std::array<std::string_view, kNumFeatures>& FeatureNames() {
  return kFeatureNames;
}

std::array<double, kNumRetainedFeatures> FeatureVector::Retained() const {
  std::array<double, kNumRetainedFeatures> out;
  for (int i = 0; i < kNumRetainedFeatures; ++i) {
    out[i] = values[kFirstRetainedFeature + i];
  }
  return out;
}

FeatureVector ExtractFeatures(const IQSegment& seg) {
  if (seg.samples.empty()) throw ArgumentError("ExtractFeatures: empty segment");
  const DescriptiveStats d = ComputeDescriptiveStats(std::span<const Sample>(seg.samples));
  const CumulantSet c = Cumulants(std::span<const Sample>(seg.samples));

  FeatureVector fv;
  fv.snr_db = seg.snr_db;
  fv[Feature::kNobs] = d.nobs;
  fv[Feature::kMin] = d.min;
  fv[Feature::kMax] = d.max;
  fv[Feature::kMean] = d.mean;
  fv[Feature::kVariance] = d.variance;
  fv[Feature::kSkewness] = d.skewness;
  fv[Feature::kKurtosis] = d.kurtosis;
  fv[Feature::kC20] = std::abs(c.c20);
  fv[Feature::kC21] = std::abs(c.c21);
  fv[Feature::kC40] = std::abs(c.c40);
  fv[Feature::kC41] = std::abs(c.c41);
  fv[Feature::kC42] = std::abs(c.c42);
  fv[Feature::kC60] = std::abs(c.c60);
  fv[Feature::kC61] = std::abs(c.c61);
  fv[Feature::kC62] = std::abs(c.c62);
  fv[Feature::kC63] = std::abs(c.c63);
  fv[Feature::kC80] = std::abs(c.c80);

  const double c21 = fv[Feature::kC21];
  fv[Feature::kC40Norm] = SafeRatio(fv[Feature::kC40], c21 * c21);
  fv[Feature::kC42Norm] = SafeRatio(fv[Feature::kC42], c21 * c21);
  fv[Feature::kC63Norm] = SafeRatio(fv[Feature::kC63], c21 * c21 * c21);
  fv[Feature::kC80Norm] = SafeRatio(fv[Feature::kC80], c21 * c21 * c21 * c21);
  return fv;
}

void WriteFeaturesCsv(std::ostream& out, const std::vector<LabeledFeatures>& rows) {
  out << fmt::format("{},label,snr_db\n", fmt::join(kFeatureNames, ","));
  for (const auto& row : rows) {
    out << fmt::format("{},{},{}\n", fmt::join(row.features.values, ","),
                       LabelName(row.label), row.features.snr_db);
  }
}

void WriteFeaturesCsv(const std::filesystem::path& path,
                      const std::vector<LabeledFeatures>& rows) {
  auto out = internal::OpenForWrite(path);
  WriteFeaturesCsv(out, rows);
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

std::vector<LabeledFeatures> ReadFeaturesCsv(const std::filesystem::path& path) {
  std::vector<std::string> header;
  const auto rows = internal::ReadCsv(path, &header);
  if (header.size() != kNumFeatures + 2) {
    throw FormatError(fmt::format("'{}': expected {} columns, got {}", path.string(),
                                  kNumFeatures + 2, header.size()));
  }
  for (int i = 0; i < kNumFeatures; ++i) {
    if (header[i] != kFeatureNames[i]) {
      throw FormatError(fmt::format("'{}': column {} should be '{}', found '{}'",
                                    path.string(), i, kFeatureNames[i], header[i]));
    }
  }
  std::vector<LabeledFeatures> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    LabeledFeatures lf;
    for (int i = 0; i < kNumFeatures; ++i) {
      lf.features.values[i] = internal::ParseDouble(row[i], path.string());
    }
    const auto label = ParseLabel(row[kNumFeatures]);
    if (!label) {
      throw FormatError(fmt::format("'{}': unknown label '{}'", path.string(),
                                    row[kNumFeatures]));
    }
    lf.label = *label;
    lf.features.snr_db = internal::ParseDouble(row[kNumFeatures + 1], path.string());
    out.push_back(lf);
  }
  return out;
}

}  // namespace discamc
