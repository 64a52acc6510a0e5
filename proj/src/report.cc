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

#include "discamc/report.h"

#include <cmath>
#include <fstream>

#include "csv_util.h"
#include "discamc/errors.h"
#include "discamc/svg_plot.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"

namespace discamc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json SnrJson(double snr) {
  if (std::isinf(snr)) return nullptr;
  return snr;
}

double SnrFromJson(const json& j) { return j.is_null() ? kNoiselessSnr : j.get<double>(); }

json TokensJson(const TokenStats& t) {
  return {{"mean", t.mean}, {"min", t.min}, {"max", t.max}};
}

TokenStats TokensFromJson(const json& j) {
  return {j.at("mean").get<double>(), j.at("min").get<int64_t>(), j.at("max").get<int64_t>()};
}

Prediction PredictionFromString(const std::string& s) {
  if (s == kUnknownOption) return Prediction::Unknown();
  if (auto l = ParseLabel(s)) return Prediction::Of(*l);
  if (s == "PARSE_FAILURE") return Prediction::ParseFailure();
  throw FormatError(fmt::format("unknown prediction '{}'", s));
}

std::string SnrText(double snr) { return std::isinf(snr) ? "inf" : fmt::format("{}", snr); }

void WriteText(const fs::path& path, std::string_view text) {
  auto out = internal::OpenForWrite(path);
  out << text;
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
  }
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "svg") return ReportFormat::kSvg;
  throw ArgumentError(fmt::format("unknown report format '{}' (json, csv or svg)", name));
}

std::string ReportToJson(const EvalReport& r) {
  json per_snr = json::array();
  for (const auto& b : r.per_snr) {
    per_snr.push_back({{"snr_db", SnrJson(b.snr_db)},
                       {"total", b.total},
                       {"correct", b.correct},
                       {"accuracy", b.accuracy}});
  }
  std::vector<std::string> columns;
  for (ModulationLabel l : kAllLabels) columns.emplace_back(LabelName(l));
  columns.emplace_back(kUnknownOption);
  columns.emplace_back("PARSE_FAILURE");
  json records = json::array();
  for (const auto& q : r.records) {
    records.push_back({{"id", q.id},
                       {"label", LabelName(q.label)},
                       {"snr_db", SnrJson(q.snr_db)},
                       {"options", q.options},
                       {"exemplar_ids", q.exemplar_ids},
                       {"predicted", q.predicted.ToString()},
                       {"correct", q.correct},
                       {"tokens", q.tokens},
                       {"baseline_tokens", q.baseline_tokens},
                       {"statistics_fields_min", q.statistics_fields_min},
                       {"statistics_fields_max", q.statistics_fields_max},
                       {"attempts", q.attempts},
                       {"latency_ms", q.latency_ms},
                       {"raw_response", q.raw_response}});
  }
  json doc = {{"seed", r.seed},
              {"template_version", r.template_version},
              {"config", json::parse(r.config_json.empty() ? "{}" : r.config_json)},
              {"classifier", r.classifier},
              {"total", r.total},
              {"correct", r.correct},
              {"parse_failures", r.parse_failures},
              {"unknown", r.unknown},
              {"overall_accuracy", r.overall_accuracy},
              {"parse_failure_rate", r.parse_failure_rate},
              {"shortlist_hit_rate", r.shortlist_hit_rate},
              {"per_snr", per_snr},
              {"confusion", {{"rows", std::vector<std::string>(columns.begin(), columns.begin() + kNumLabels)},
                             {"columns", columns},
                             {"counts", r.confusion}}},
              {"tokens", TokensJson(r.tokens)},
              {"baseline_tokens", r.baseline_tokens ? TokensJson(*r.baseline_tokens) : json(nullptr)},
              {"token_ratio", r.token_ratio ? json(*r.token_ratio) : json(nullptr)},
              {"records", records}};
  if (r.wall_clock_ms) doc["wall_clock_ms"] = *r.wall_clock_ms;
  return doc.dump(2);
}

EvalReport ReportFromJson(std::string_view text) {
  EvalReport r;
  try {
    const json doc = json::parse(text);
    r.seed = doc.at("seed").get<uint64_t>();
    r.template_version = doc.at("template_version").get<std::string>();
    r.config_json = doc.at("config").dump();
    r.classifier = doc.at("classifier").get<std::string>();
    r.total = doc.at("total").get<int>();
    r.correct = doc.at("correct").get<int>();
    r.parse_failures = doc.at("parse_failures").get<int>();
    r.unknown = doc.at("unknown").get<int>();
    r.overall_accuracy = doc.at("overall_accuracy").get<double>();
    r.parse_failure_rate = doc.at("parse_failure_rate").get<double>();
    r.shortlist_hit_rate = doc.at("shortlist_hit_rate").get<double>();
    for (const auto& b : doc.at("per_snr")) {
      r.per_snr.push_back({SnrFromJson(b.at("snr_db")), b.at("total").get<int>(),
                           b.at("correct").get<int>(), b.at("accuracy").get<double>()});
    }
    r.confusion = doc.at("confusion").at("counts").get<decltype(r.confusion)>();
    r.tokens = TokensFromJson(doc.at("tokens"));
    if (!doc.at("baseline_tokens").is_null()) {
      r.baseline_tokens = TokensFromJson(doc.at("baseline_tokens"));
    }
    if (!doc.at("token_ratio").is_null()) r.token_ratio = doc.at("token_ratio").get<double>();
    for (const auto& q : doc.at("records")) {
      QueryRecord rec;
      rec.id = q.at("id").get<std::string>();
      rec.label = LabelFromString(q.at("label").get<std::string>());
      rec.snr_db = SnrFromJson(q.at("snr_db"));
      rec.options = q.at("options").get<std::vector<std::string>>();
      rec.exemplar_ids = q.at("exemplar_ids").get<std::vector<std::string>>();
      rec.predicted = PredictionFromString(q.at("predicted").get<std::string>());
      rec.correct = q.at("correct").get<bool>();
      rec.tokens = q.at("tokens").get<int64_t>();
      rec.baseline_tokens = q.at("baseline_tokens").get<int64_t>();
      rec.statistics_fields_min = q.at("statistics_fields_min").get<int>();
      rec.statistics_fields_max = q.at("statistics_fields_max").get<int>();
      rec.attempts = q.at("attempts").get<int>();
      rec.latency_ms = q.at("latency_ms").get<int64_t>();
      rec.raw_response = q.at("raw_response").get<std::string>();
      r.records.push_back(std::move(rec));
    }
    if (doc.contains("wall_clock_ms")) r.wall_clock_ms = doc.at("wall_clock_ms").get<int64_t>();
  } catch (const json::exception& ex) {
    throw FormatError(fmt::format("malformed report: {}", ex.what()));
  } catch (const ArgumentError& ex) {
    throw FormatError(fmt::format("malformed report: {}", ex.what()));
  }
  return r;
}

std::vector<fs::path> EmitReport(const EvalReport& r, ReportFormat format,
                                 const fs::path& out_dir, std::string_view stem) {
  EnsureDir(out_dir);
  std::vector<fs::path> written;
  switch (format) {
    case ReportFormat::kJson: {
      const fs::path p = out_dir / fmt::format("{}.json", stem);
      WriteText(p, ReportToJson(r) + "\n");
      written.push_back(p);
      break;
    }
    case ReportFormat::kCsv: {
      std::string queries =
          "id,label,snr_db,predicted,correct,k,options,tokens,baseline_tokens,attempts\n";
      for (const auto& q : r.records) {
        queries += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", q.id, LabelName(q.label),
                               SnrText(q.snr_db), q.predicted.ToString(), q.correct ? 1 : 0,
                               q.options.size(), fmt::join(q.options, " "), q.tokens,
                               q.baseline_tokens, q.attempts);
      }
      std::string snr = "snr_db,total,correct,accuracy\n";
      for (const auto& b : r.per_snr) {
        snr += fmt::format("{},{},{},{}\n", SnrText(b.snr_db), b.total, b.correct, b.accuracy);
      }
      std::string confusion = "true_label";
      for (ModulationLabel l : kAllLabels) confusion += fmt::format(",{}", LabelName(l));
      confusion += ",UNKNOWN,PARSE_FAILURE\n";
      for (ModulationLabel l : kAllLabels) {
        confusion += fmt::format("{},{}\n", LabelName(l),
                                 fmt::join(r.confusion[LabelIndex(l)], ","));
      }
      const fs::path p1 = out_dir / fmt::format("{}_queries.csv", stem);
      const fs::path p2 = out_dir / fmt::format("{}_snr.csv", stem);
      const fs::path p3 = out_dir / fmt::format("{}_confusion.csv", stem);
      WriteText(p1, queries);
      WriteText(p2, snr);
      WriteText(p3, confusion);
      written = {p1, p2, p3};
      break;
    }
    case ReportFormat::kSvg: {
      LineChart chart;
      chart.title = "Accuracy vs SNR";
      chart.x_label = "SNR (dB)";
      chart.y_label = "accuracy";
      PlotSeries s{"accuracy", {}, false};
      for (const auto& b : r.per_snr) {
        if (std::isfinite(b.snr_db)) s.points.emplace_back(b.snr_db, b.accuracy);
      }
      chart.series.push_back(std::move(s));
      const fs::path p = out_dir / fmt::format("{}_accuracy_vs_snr.svg", stem);
      WriteText(p, RenderSvg(chart));
      written.push_back(p);
      break;
    }
  }
  return written;
}

std::vector<fs::path> EmitKSeries(const std::vector<KPoint>& series, ReportFormat format,
                                  const fs::path& out_dir) {
  EnsureDir(out_dir);
  fs::path p;
  switch (format) {
    case ReportFormat::kJson: {
      json rows = json::array();
      for (const auto& pt : series) {
        rows.push_back({{"k", pt.k}, {"accuracy", pt.accuracy}, {"mean_tokens", pt.mean_tokens}});
      }
      p = out_dir / "ablate_k.json";
      WriteText(p, rows.dump(2) + "\n");
      break;
    }
    case ReportFormat::kCsv: {
      std::string csv = "k,accuracy,mean_tokens\n";
      for (const auto& pt : series) csv += fmt::format("{},{},{}\n", pt.k, pt.accuracy, pt.mean_tokens);
      p = out_dir / "ablate_k.csv";
      WriteText(p, csv);
      break;
    }
    case ReportFormat::kSvg: {
      LineChart chart{"Accuracy and prompt size vs k", "k", "accuracy", "mean tokens", {}, {}};
      PlotSeries acc{"accuracy", {}, false}, tok{"mean_tokens", {}, true};
      for (const auto& pt : series) {
        acc.points.emplace_back(pt.k, pt.accuracy);
        tok.points.emplace_back(pt.k, pt.mean_tokens);
      }
      chart.series = {acc, tok};
      p = out_dir / "ablate_k.svg";
      WriteText(p, RenderSvg(chart));
      break;
    }
  }
  return {p};
}

std::vector<fs::path> EmitBinsSeries(const std::vector<BinsPoint>& series, ReportFormat format,
                                     const fs::path& out_dir) {
  EnsureDir(out_dir);
  fs::path p;
  switch (format) {
    case ReportFormat::kJson: {
      json rows = json::array();
      for (const auto& pt : series) {
        rows.push_back({{"bins", pt.bins},
                        {"accuracy", pt.accuracy},
                        {"mean_tokens", pt.mean_tokens},
                        {"statistics_fields_min", pt.statistics_fields_min},
                        {"statistics_fields_max", pt.statistics_fields_max}});
      }
      p = out_dir / "ablate_bins.json";
      WriteText(p, rows.dump(2) + "\n");
      break;
    }
    case ReportFormat::kCsv: {
      std::string csv = "bins,accuracy,mean_tokens,statistics_fields_min,statistics_fields_max\n";
      for (const auto& pt : series) {
        csv += fmt::format("{},{},{},{},{}\n", pt.bins, pt.accuracy, pt.mean_tokens,
                           pt.statistics_fields_min, pt.statistics_fields_max);
      }
      p = out_dir / "ablate_bins.csv";
      WriteText(p, csv);
      break;
    }
    case ReportFormat::kSvg: {
      LineChart chart{"Accuracy vs number of bins", "bins (B)", "accuracy", "", {}, {}};
      PlotSeries acc{"accuracy", {}, false};
      for (const auto& pt : series) acc.points.emplace_back(pt.bins, pt.accuracy);
      chart.series = {acc};
      p = out_dir / "ablate_bins.svg";
      WriteText(p, RenderSvg(chart));
      break;
    }
  }
  return {p};
}

std::vector<fs::path> EmitStrategySeries(const std::vector<StrategyPoint>& series,
                                         ReportFormat format, const fs::path& out_dir) {
  EnsureDir(out_dir);
  fs::path p;
  switch (format) {
    case ReportFormat::kJson: {
      json rows = json::array();
      for (const auto& pt : series) {
        rows.push_back({{"strategy", StrategyName(pt.strategy)},
                        {"accuracy", pt.accuracy},
                        {"mean_tokens", pt.mean_tokens},
                        {"seed", pt.seed}});
      }
      p = out_dir / "ablate_strategy.json";
      WriteText(p, rows.dump(2) + "\n");
      break;
    }
    case ReportFormat::kCsv: {
      std::string csv = "strategy,accuracy,mean_tokens,seed\n";
      for (const auto& pt : series) {
        csv += fmt::format("{},{},{},{}\n", StrategyName(pt.strategy), pt.accuracy,
                           pt.mean_tokens, pt.seed);
      }
      p = out_dir / "ablate_strategy.csv";
      WriteText(p, csv);
      break;
    }
    case ReportFormat::kSvg: {
      LineChart chart{"Accuracy per exemplar strategy", "strategy", "accuracy", "", {}, {}};
      PlotSeries acc{"accuracy", {}, false};
      for (size_t i = 0; i < series.size(); ++i) {
        acc.points.emplace_back(static_cast<double>(i), series[i].accuracy);
        chart.x_categories.emplace_back(StrategyName(series[i].strategy));
      }
      chart.series = {acc};
      p = out_dir / "ablate_strategy.svg";
      WriteText(p, RenderSvg(chart));
      break;
    }
  }
  return {p};
}

std::vector<fs::path> EmitTopKCurve(const std::vector<double>& accuracy, ReportFormat format,
                                    const fs::path& out_dir) {
  EnsureDir(out_dir);
  fs::path p;
  switch (format) {
    case ReportFormat::kJson: {
      json rows = json::array();
      for (size_t i = 0; i < accuracy.size(); ++i) {
        rows.push_back({{"k", i + 1}, {"topk_accuracy", accuracy[i]}});
      }
      p = out_dir / "shortlist_topk.json";
      WriteText(p, rows.dump(2) + "\n");
      break;
    }
    case ReportFormat::kCsv: {
      std::string csv = "k,topk_accuracy\n";
      for (size_t i = 0; i < accuracy.size(); ++i) csv += fmt::format("{},{}\n", i + 1, accuracy[i]);
      p = out_dir / "shortlist_topk.csv";
      WriteText(p, csv);
      break;
    }
    case ReportFormat::kSvg: {
      LineChart chart{"Shortlist top-k accuracy", "k", "top-k accuracy", "", {}, {}};
      PlotSeries acc{"topk_accuracy", {}, false};
      for (size_t i = 0; i < accuracy.size(); ++i) {
        acc.points.emplace_back(static_cast<double>(i + 1), accuracy[i]);
      }
      chart.series = {acc};
      p = out_dir / "shortlist_topk.svg";
      WriteText(p, RenderSvg(chart));
      break;
    }
  }
  return {p};
}

}  // namespace discamc
