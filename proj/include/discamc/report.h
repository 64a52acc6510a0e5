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

#ifndef DISCAMC_REPORT_H_
#define DISCAMC_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "discamc/eval.h"

namespace discamc {

enum class ReportFormat { kJson, kCsv, kSvg };

ReportFormat ParseReportFormat(std::string_view name);

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(std::string_view text);

// Writes the requested format under out_dir and returns the files written:
//   json -> <stem>.json
//   csv  -> <stem>_queries.csv (one row per query), <stem>_snr.csv,
//           <stem>_confusion.csv
//   svg  -> <stem>_accuracy_vs_snr.svg
std::vector<std::filesystem::path> EmitReport(const EvalReport& report, ReportFormat format,
                                              const std::filesystem::path& out_dir,
                                              std::string_view stem = "report");

// Series emitters: json/csv tables, svg charts.
//   k      -> accuracy and mean tokens (secondary axis) against k
//   bins   -> accuracy against B
//   strategy -> accuracy per strategy
std::vector<std::filesystem::path> EmitKSeries(const std::vector<KPoint>& series,
                                               ReportFormat format,
                                               const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> EmitBinsSeries(const std::vector<BinsPoint>& series,
                                                  ReportFormat format,
                                                  const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> EmitStrategySeries(
    const std::vector<StrategyPoint>& series, ReportFormat format,
    const std::filesystem::path& out_dir);

// Top-k accuracy of a shortlister for k = 1..10 (index k-1).
std::vector<std::filesystem::path> EmitTopKCurve(const std::vector<double>& accuracy,
                                                 ReportFormat format,
                                                 const std::filesystem::path& out_dir);

}  // namespace discamc

#endif  // DISCAMC_REPORT_H_
