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

#ifndef DISCAMC_DATASET_H_
#define DISCAMC_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "discamc/modulation.h"

namespace discamc {

inline constexpr int kManifestSchemaVersion = 1;

// One segment on disk: `file` holds n interleaved little-endian float32
// (I, Q) pairs, i.e. exactly 8 * n bytes. `file` is relative to the
// manifest's directory.
struct ManifestEntry {
  std::string file;
  ModulationLabel label = ModulationLabel::k4Ask;
  double snr_db = kNoiselessSnr;
  int64_t n = 0;
  int sps = 1;
  uint64_t seed = 0;
};

struct DatasetManifest {
  int schema_version = kManifestSchemaVersion;
  std::vector<ManifestEntry> entries;
  // Directory the relative entry paths resolve against. Not serialized.
  std::filesystem::path base_dir;
};

struct DatasetSpec {
  std::vector<ModulationLabel> classes;
  int per_class = 20;
  std::vector<double> snr_grid;
  int n_symbols = kDefaultSymbols;
  int sps = kDefaultSps;
  uint64_t seed = 0;
};

// `steps` evenly spaced values from lo to hi inclusive (steps == 1 -> {lo}).
std::vector<double> Linspace(double lo, double hi, int steps);

// Segments in manifest order (class-major, then per-class index). Entry i
// uses seed DeriveSeed(spec.seed, i) and SNR snr_grid[j % |snr_grid|] where
// j is its index within its class. `file` is filled with the name
// GenerateDataset would use.
struct GeneratedSegment {
  ManifestEntry entry;
  IQSegment segment;
};
std::vector<GeneratedSegment> GenerateSegments(const DatasetSpec& spec);

// Generates the segments, writes one .iq file per entry plus manifest.json
// under out_dir, and returns the manifest.
DatasetManifest GenerateDataset(const DatasetSpec& spec,
                                const std::filesystem::path& out_dir);

void WriteSegmentFile(const std::filesystem::path& path, const IQSegment& seg);
std::vector<Sample> ReadSegmentFile(const std::filesystem::path& path,
                                    int64_t n);

IQSegment LoadSegment(const ManifestEntry& entry,
                      const std::filesystem::path& base_dir);
inline IQSegment LoadSegment(const DatasetManifest& manifest, size_t index) {
  return LoadSegment(manifest.entries.at(index), manifest.base_dir);
}

void WriteManifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest);
DatasetManifest ReadManifest(const std::filesystem::path& path);

}  // namespace discamc

#endif  // DISCAMC_DATASET_H_
