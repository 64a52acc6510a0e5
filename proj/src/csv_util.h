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

#ifndef DISCAMC_SRC_CSV_UTIL_H_
#define DISCAMC_SRC_CSV_UTIL_H_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/errors.h"
#include "fmt/format.h"

namespace discamc {
namespace internal {

// Fields never contain commas or quotes in this project's tables.
inline std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline double ParseDouble(const std::string& s, std::string_view context) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    if (s == "nan" || s == "NaN") return NAN;
    throw FormatError(fmt::format("{}: '{}' is not a number", context, s));
  }
  return v;
}

inline std::vector<std::vector<std::string>> ReadCsv(
    const std::filesystem::path& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = SplitCsvLine(line);
    if (first) {
      *header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != header->size()) {
      throw FormatError(fmt::format("'{}' line {}: expected {} fields, got {}",
                                    path.string(), rows.size() + 2,
                                    header->size(), fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (first) throw FormatError(fmt::format("'{}': missing CSV header", path.string()));
  return rows;
}

inline std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

}  // namespace internal
}  // namespace discamc

#endif  // DISCAMC_SRC_CSV_UTIL_H_
