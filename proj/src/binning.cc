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
#include <fstream>
#include <sstream>

#include "csv_util.h"
#include "discamc/errors.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"

namespace discamc {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kNumSymbolicFields> MakeSymbolicNames() {
  constexpr std::array<std::string_view, kNumRetainedFeatures> kRetained = {
      "skewness", "kurtosis", "c20", "c21", "c40", "c41", "c42", "c60",
      "c61",      "c62",      "c63", "c80", "c40_norm", "c42_norm",
      "c63_norm", "c80_norm",
  };
  std::array<std::string_view, kNumSymbolicFields> out{};
  out[0] = "snr";
  for (int i = 0; i < kNumRetainedFeatures; ++i) out[i + 1] = kRetained[i];
  return out;
}

constexpr auto kSymbolicNames = MakeSymbolicNames();

void ValidateBins(int bins) {
  if (bins < kMinBins || bins > kMaxBins) {
    throw ArgumentError(
        fmt::format("bin count must be in [{}, {}], got {}", kMinBins, kMaxBins, bins));
  }
}

void ValidateScheme(const BinningScheme& s) {
  ValidateBins(s.bins);
  if (!(s.snr_lo < s.snr_hi)) {
    throw FormatError(fmt::format("snr_range [{}, {}] is empty", s.snr_lo, s.snr_hi));
  }
  for (int f = 0; f < kNumRetainedFeatures; ++f) {
    const auto& e = s.edges[f];
    if (static_cast<int>(e.size()) != s.bins - 1) {
      throw FormatError(fmt::format("feature '{}' has {} edges, expected {}",
                                    kSymbolicNames[f + 1], e.size(), s.bins - 1));
    }
    if (!std::is_sorted(e.begin(), e.end())) {
      throw FormatError(
          fmt::format("feature '{}' edges are not sorted", kSymbolicNames[f + 1]));
    }
  }
}

}  // namespace

std::string BinningScheme::Alphabet() const {
  std::string out;
  for (int i = 0; i < bins; ++i) out.push_back(BinToken(i));
  return out;
}

const std::array<std::string_view, kNumSymbolicFields>& SymbolicFieldNames() {
  return kSymbolicNames;
}

BinningScheme Calibrate(std::span<const FeatureVector> corpus, int bins,
                        double snr_lo, double snr_hi) {
  ValidateBins(bins);
  const size_t n = corpus.size();
  if (n < static_cast<size_t>(kMinCorpusPerBin) * bins) {
    throw PipelineError(fmt::format(
        "calibration corpus has {} vectors; {} bins need at least {}", n, bins,
        kMinCorpusPerBin * bins));
  }
  if (!(snr_lo < snr_hi)) {
    throw ArgumentError(fmt::format("snr_range [{}, {}] is empty", snr_lo, snr_hi));
  }
  BinningScheme scheme;
  scheme.bins = bins;
  scheme.snr_lo = snr_lo;
  scheme.snr_hi = snr_hi;
  std::vector<double> column(n);
  for (int f = 0; f < kNumRetainedFeatures; ++f) {
    for (size_t i = 0; i < n; ++i) {
      column[i] = corpus[i].values[kFirstRetainedFeature + f];
      if (std::isnan(column[i])) {
        throw PipelineError(fmt::format("calibration corpus vector {} has NaN '{}'",
                                        i, kSymbolicNames[f + 1]));
      }
    }
    std::sort(column.begin(), column.end());
    auto& edges = scheme.edges[f];
    edges.resize(bins - 1);
    for (int b = 1; b < bins; ++b) {
      const size_t rank = (static_cast<size_t>(b) * n + bins - 1) / bins;  // ceil
      edges[b - 1] = column[rank - 1];
    }
  }
  return scheme;
}

int BinIndex(double value, std::span<const double> edges) {
  return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), value) -
                          edges.begin());
}

char BinToken(int index) { return static_cast<char>('A' + index); }

char SnrBin(double snr_db, const BinningScheme& scheme) {
  if (std::isnan(snr_db)) throw ArgumentError("SnrBin: snr_db is NaN");
  const double width = (scheme.snr_hi - scheme.snr_lo) / scheme.bins;
  const double pos = (snr_db - scheme.snr_lo) / width;
  // ceil(pos) - 1 puts exact edges in the lower bin.
  const double idx = std::clamp(std::ceil(pos) - 1.0, 0.0,
                                static_cast<double>(scheme.bins - 1));
  return BinToken(static_cast<int>(idx));
}

std::string SymbolicFeatures::Render() const {
  std::string out;
  for (int i = 0; i < kNumSymbolicFields; ++i) {
    if (i > 0) out += ", ";
    out += fields[i].name;
    out += ": ";
    out.push_back(fields[i].token);
  }
  return out;
}

SymbolicFeatures Quantize(const FeatureVector& fv, const BinningScheme& scheme) {
  if (std::isnan(fv.snr_db)) throw PipelineError("cannot quantize NaN feature 'snr'");
  SymbolicFeatures out;
  out.fields[0] = {kSymbolicNames[0], SnrBin(fv.snr_db, scheme)};
  for (int f = 0; f < kNumRetainedFeatures; ++f) {
    const double v = fv.values[kFirstRetainedFeature + f];
    if (std::isnan(v)) {
      throw PipelineError(
          fmt::format("cannot quantize NaN feature '{}'", kSymbolicNames[f + 1]));
    }
    out.fields[f + 1] = {kSymbolicNames[f + 1], BinToken(BinIndex(v, scheme.edges[f]))};
  }
  return out;
}

std::string SchemeToJson(const BinningScheme& scheme) {
  json features = json::array();
  for (int f = 0; f < kNumRetainedFeatures; ++f) {
    features.push_back({{"name", kSymbolicNames[f + 1]}, {"edges", scheme.edges[f]}});
  }
  json doc = {{"bins", scheme.bins},
              {"alphabet", scheme.Alphabet()},
              {"snr_range", {scheme.snr_lo, scheme.snr_hi}},
              {"features", features}};
  return doc.dump(2);
}

BinningScheme SchemeFromJson(std::string_view text) {
  BinningScheme scheme;
  try {
    const json doc = json::parse(text);
    scheme.bins = doc.at("bins").get<int>();
    scheme.snr_lo = doc.at("snr_range").at(0).get<double>();
    scheme.snr_hi = doc.at("snr_range").at(1).get<double>();
    const auto& features = doc.at("features");
    if (features.size() != kNumRetainedFeatures) {
      throw FormatError(fmt::format("scheme lists {} features, expected {}",
                                    features.size(), kNumRetainedFeatures));
    }
    for (int f = 0; f < kNumRetainedFeatures; ++f) {
      const auto name = features[f].at("name").get<std::string>();
      if (name != kSymbolicNames[f + 1]) {
        throw FormatError(fmt::format("scheme feature {} is '{}', expected '{}'", f,
                                      name, kSymbolicNames[f + 1]));
      }
      scheme.edges[f] = features[f].at("edges").get<std::vector<double>>();
    }
  } catch (const json::exception& ex) {
    throw FormatError(fmt::format("malformed binning scheme: {}", ex.what()));
  }
  ValidateScheme(scheme);
  return scheme;
}

void WriteScheme(const std::filesystem::path& path, const BinningScheme& scheme) {
  auto out = internal::OpenForWrite(path);
  out << SchemeToJson(scheme) << '\n';
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

BinningScheme ReadScheme(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open scheme '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return SchemeFromJson(buffer.str());
  } catch (const FormatError& ex) {
    throw FormatError(fmt::format("'{}': {}", path.string(), ex.what()));
  }
}

void WriteSymbolicCsv(const std::filesystem::path& path,
                      const std::vector<LabeledFeatures>& rows,
                      const BinningScheme& scheme) {
  auto out = internal::OpenForWrite(path);
  out << "label," << fmt::format("{}", fmt::join(kSymbolicNames, ",")) << '\n';
  for (const auto& row : rows) {
    const SymbolicFeatures sym = Quantize(row.features, scheme);
    out << LabelName(row.label);
    for (const auto& field : sym.fields) out << ',' << field.token;
    out << '\n';
  }
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace discamc
