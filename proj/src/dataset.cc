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

#include "discamc/dataset.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "discamc/errors.h"
#include "discamc/random.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"

namespace discamc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void PutLe32(float v, char* out) {
  uint32_t bits = std::bit_cast<uint32_t>(v);
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
}

float GetLe32(const char* in) {
  uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) {
    bits |= static_cast<uint32_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  }
  return std::bit_cast<float>(bits);
}

std::string SegmentFileName(size_t index) {
  return fmt::format("seg_{:05d}.iq", index);
}

json SnrToJson(double snr_db) {
  if (std::isinf(snr_db)) return nullptr;
  return snr_db;
}

}  // namespace

std::vector<double> Linspace(double lo, double hi, int steps) {
  if (steps < 1) throw ArgumentError("Linspace: steps must be >= 1");
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<GeneratedSegment> GenerateSegments(const DatasetSpec& spec) {
  if (spec.classes.empty()) throw ArgumentError("dataset needs at least one class");
  if (spec.per_class < 1) throw ArgumentError("per_class must be >= 1");
  if (spec.snr_grid.empty()) throw ArgumentError("snr_grid must be nonempty");

  std::vector<GeneratedSegment> out;
  out.reserve(spec.classes.size() * spec.per_class);
  size_t index = 0;
  for (ModulationLabel label : spec.classes) {
    for (int j = 0; j < spec.per_class; ++j, ++index) {
      const uint64_t seed = DeriveSeed(spec.seed, index);
      const double snr = spec.snr_grid[j % spec.snr_grid.size()];
      IQSegment seg = Modulate(label, spec.n_symbols, spec.sps, DeriveSeed(seed, 0));
      seg = AddAwgn(seg, snr, DeriveSeed(seed, 1));
      ManifestEntry entry{SegmentFileName(index), label, snr,
                          static_cast<int64_t>(seg.n()), spec.sps, seed};
      out.push_back({std::move(entry), std::move(seg)});
    }
  }
  return out;
}

DatasetManifest GenerateDataset(const DatasetSpec& spec, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create directory '{}': {}",
                              out_dir.string(), ec.message()));
  }
  DatasetManifest manifest;
  manifest.base_dir = out_dir;
  for (auto& g : GenerateSegments(spec)) {
    WriteSegmentFile(out_dir / g.entry.file, g.segment);
    manifest.entries.push_back(std::move(g.entry));
  }
  WriteManifest(out_dir / "manifest.json", manifest);
  return manifest;
}

void WriteSegmentFile(const fs::path& path, const IQSegment& seg) {
  std::string bytes(seg.samples.size() * 8, '\0');
  for (size_t i = 0; i < seg.samples.size(); ++i) {
    PutLe32(seg.samples[i].real(), &bytes[8 * i]);
    PutLe32(seg.samples[i].imag(), &bytes[8 * i + 4]);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

std::vector<Sample> ReadSegmentFile(const fs::path& path, int64_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (n < 1 || bytes.size() != static_cast<size_t>(n) * 8) {
    throw FormatError(fmt::format("'{}': expected {} bytes for n={}, found {}",
                                  path.string(), n * 8, n, bytes.size()));
  }
  std::vector<Sample> samples(static_cast<size_t>(n));
  for (size_t i = 0; i < samples.size(); ++i) {
    samples[i] = Sample(GetLe32(&bytes[8 * i]), GetLe32(&bytes[8 * i + 4]));
  }
  return samples;
}

IQSegment LoadSegment(const ManifestEntry& entry, const fs::path& base_dir) {
  IQSegment seg;
  seg.samples = ReadSegmentFile(base_dir / entry.file, entry.n);
  seg.label = entry.label;
  seg.snr_db = entry.snr_db;
  seg.sps = entry.sps;
  return seg;
}

void WriteManifest(const fs::path& path, const DatasetManifest& manifest) {
  json entries = json::array();
  for (const auto& e : manifest.entries) {
    entries.push_back({{"file", e.file},
                       {"label", LabelName(e.label)},
                       {"snr_db", SnrToJson(e.snr_db)},
                       {"n", e.n},
                       {"sps", e.sps},
                       {"seed", e.seed}});
  }
  json doc = {{"schema_version", manifest.schema_version}, {"entries", entries}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << doc.dump(2) << '\n';
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

DatasetManifest ReadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open manifest '{}'", path.string()));
  DatasetManifest manifest;
  manifest.base_dir = path.parent_path();
  try {
    const json doc = json::parse(in);
    manifest.schema_version = doc.at("schema_version").get<int>();
    if (manifest.schema_version != kManifestSchemaVersion) {
      throw FormatError(fmt::format(
          "'{}': unsupported manifest schema_version {} (supported: {})",
          path.string(), manifest.schema_version, kManifestSchemaVersion));
    }
    for (const auto& e : doc.at("entries")) {
      ManifestEntry entry;
      entry.file = e.at("file").get<std::string>();
      const auto label = ParseLabel(e.at("label").get<std::string>());
      if (!label) {
        throw FormatError(fmt::format("'{}': unknown label '{}'", path.string(),
                                      e.at("label").get<std::string>()));
      }
      entry.label = *label;
      entry.snr_db = e.at("snr_db").is_null() ? kNoiselessSnr
                                              : e.at("snr_db").get<double>();
      entry.n = e.at("n").get<int64_t>();
      entry.sps = e.at("sps").get<int>();
      entry.seed = e.at("seed").get<uint64_t>();
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& ex) {
    throw FormatError(fmt::format("'{}': malformed manifest: {}", path.string(), ex.what()));
  }
  return manifest;
}

}  // namespace discamc
