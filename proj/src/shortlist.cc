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

#include "discamc/shortlist.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "csv_util.h"
#include "discamc/errors.h"
#include "discamc/random.h"
#include "fmt/format.h"
#include "nlohmann/json.hpp"

namespace discamc {
namespace {

using nlohmann::json;

// Canonical order for training rows so that sums are order-independent.
bool CanonicalLess(const LabeledFeatures& a, const LabeledFeatures& b) {
  if (a.label != b.label) return a.label < b.label;
  if (a.features.values != b.features.values) {
    return a.features.values < b.features.values;
  }
  return a.features.snr_db < b.features.snr_db;
}

std::string LabelList(const std::vector<ModulationLabel>& labels) {
  std::vector<std::string_view> names;
  for (auto l : labels) names.push_back(LabelName(l));
  return fmt::format("{}", fmt::join(names, ", "));
}

}  // namespace

bool Shortlist::Contains(ModulationLabel label) const {
  return std::find(candidates.begin(), candidates.end(), label) != candidates.end();
}

void ValidateK(int k) {
  if (k < 1 || k > kNumLabels) {
    throw ArgumentError(fmt::format("k must be in [1, {}], got {}", kNumLabels, k));
  }
}

RetainedArray CentroidModel::ZScore(const FeatureVector& fv) const {
  RetainedArray z;
  const RetainedArray x = fv.Retained();
  for (int i = 0; i < kNumRetainedFeatures; ++i) z[i] = (x[i] - mean[i]) / stddev[i];
  return z;
}

double CentroidModel::Distance(const FeatureVector& fv, ModulationLabel label) const {
  const RetainedArray z = ZScore(fv);
  const RetainedArray& c = centroids[LabelIndex(label)];
  double d = 0;
  for (int i = 0; i < kNumRetainedFeatures; ++i) d += (z[i] - c[i]) * (z[i] - c[i]);
  return d;
}

CentroidModel TrainCentroids(std::span<const LabeledFeatures> train,
                             std::string corpus_id,
                             std::span<const ModulationLabel> classes) {
  if (classes.empty()) throw ArgumentError("centroid training needs at least one class");
  std::array<bool, kNumLabels> wanted{};
  for (ModulationLabel l : classes) wanted[LabelIndex(l)] = true;
  std::array<int, kNumLabels> counts{};
  std::vector<LabeledFeatures> rows;
  for (const auto& row : train) {
    if (!wanted[LabelIndex(row.label)]) continue;
    ++counts[LabelIndex(row.label)];
    rows.push_back(row);
  }
  std::vector<ModulationLabel> short_classes;
  for (ModulationLabel l : kAllLabels) {
    if (wanted[LabelIndex(l)] && counts[LabelIndex(l)] < 2) short_classes.push_back(l);
  }
  if (!short_classes.empty()) {
    throw PipelineError(fmt::format(
        "centroid training needs >= 2 samples per class; missing or short: {}",
        LabelList(short_classes)));
  }

  std::sort(rows.begin(), rows.end(), CanonicalLess);
  const double n = static_cast<double>(rows.size());

  CentroidModel model;
  model.classes.clear();
  for (ModulationLabel l : kAllLabels) {
    if (wanted[LabelIndex(l)]) model.classes.push_back(l);
  }
  model.corpus_id = std::move(corpus_id);
  model.corpus_size = static_cast<int64_t>(rows.size());
  for (const auto& row : rows) {
    const auto x = row.features.Retained();
    for (int i = 0; i < kNumRetainedFeatures; ++i) model.mean[i] += x[i];
  }
  for (double& m : model.mean) m /= n;
  for (const auto& row : rows) {
    const auto x = row.features.Retained();
    for (int i = 0; i < kNumRetainedFeatures; ++i) {
      model.stddev[i] += (x[i] - model.mean[i]) * (x[i] - model.mean[i]);
    }
  }
  for (double& s : model.stddev) s = std::max(std::sqrt(s / n), kStddevFloor);

  for (const auto& row : rows) {
    const auto z = model.ZScore(row.features);
    auto& c = model.centroids[LabelIndex(row.label)];
    for (int i = 0; i < kNumRetainedFeatures; ++i) c[i] += z[i];
  }
  for (ModulationLabel l : model.classes) {
    for (double& v : model.centroids[LabelIndex(l)]) v /= counts[LabelIndex(l)];
  }
  return model;
}

std::vector<ModulationLabel> RankByCentroid(const FeatureVector& fv,
                                            const CentroidModel& model) {
  std::array<double, kNumLabels> dist{};
  for (ModulationLabel l : model.classes) dist[LabelIndex(l)] = model.Distance(fv, l);
  std::vector<ModulationLabel> order = model.classes;
  std::stable_sort(order.begin(), order.end(), [&](ModulationLabel a, ModulationLabel b) {
    return dist[LabelIndex(a)] < dist[LabelIndex(b)];
  });
  return order;
}

Shortlist ShortlistByCentroid(const FeatureVector& fv, const CentroidModel& model,
                              int k) {
  ValidateK(k);
  if (k > static_cast<int>(model.classes.size())) {
    throw ArgumentError(fmt::format("k={} exceeds the model's {} classes", k,
                                    model.classes.size()));
  }
  auto order = RankByCentroid(fv, model);
  order.resize(k);
  return Shortlist{std::move(order)};
}

double TopKAccuracy(const CentroidModel& model, std::span<const LabeledFeatures> test,
                    int k) {
  ValidateK(k);
  if (test.empty()) throw ArgumentError("TopKAccuracy: empty test set");
  size_t hits = 0;
  for (const auto& row : test) {
    if (ShortlistByCentroid(row.features, model, k).Contains(row.label)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

Shortlist OracleShortlist(ModulationLabel true_label, int k, uint64_t seed,
                          std::span<const ModulationLabel> universe) {
  ValidateK(k);
  Rng rng = MakeRng(seed);
  std::vector<ModulationLabel> distractors;
  for (ModulationLabel l : kAllLabels) {
    if (l != true_label &&
        std::find(universe.begin(), universe.end(), l) != universe.end()) {
      distractors.push_back(l);
    }
  }
  if (k - 1 > static_cast<int>(distractors.size())) {
    throw ArgumentError(fmt::format("k={} exceeds the {} available classes", k,
                                    distractors.size() + 1));
  }
  std::shuffle(distractors.begin(), distractors.end(), rng);
  distractors.resize(k - 1);
  std::uniform_int_distribution<int> pos(0, k - 1);
  distractors.insert(distractors.begin() + pos(rng), true_label);
  return Shortlist{std::move(distractors)};
}

std::map<std::string, Shortlist> ParseShortlists(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw FormatError(fmt::format("shortlist file is not valid JSON: {}", ex.what()));
  }
  if (!doc.is_object()) throw FormatError("shortlist file must be a JSON object");
  std::map<std::string, Shortlist> out;
  for (const auto& [id, list] : doc.items()) {
    if (!list.is_array() || list.empty()) {
      throw FormatError(fmt::format("shortlist '{}' must be a nonempty array", id));
    }
    if (list.size() > static_cast<size_t>(kNumLabels)) {
      throw FormatError(fmt::format("shortlist '{}' has {} entries (max {})", id,
                                    list.size(), kNumLabels));
    }
    Shortlist s;
    for (const auto& item : list) {
      if (!item.is_string()) {
        throw FormatError(fmt::format("shortlist '{}' has a non-string entry", id));
      }
      const auto name = item.get<std::string>();
      const auto label = ParseLabel(name);
      if (!label) {
        throw FormatError(fmt::format("shortlist '{}': unknown label '{}'", id, name));
      }
      if (s.Contains(*label)) {
        throw FormatError(fmt::format("shortlist '{}': duplicate label '{}'", id, name));
      }
      s.candidates.push_back(*label);
    }
    out.emplace(id, std::move(s));
  }
  return out;
}

std::map<std::string, Shortlist> ImportShortlists(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open shortlist file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseShortlists(buffer.str());
  } catch (const FormatError& ex) {
    throw FormatError(fmt::format("'{}': {}", path.string(), ex.what()));
  }
}

std::string CentroidModelToJson(const CentroidModel& model) {
  json centroids = json::object();
  for (ModulationLabel l : kAllLabels) {
    centroids[std::string(LabelName(l))] = model.centroids[LabelIndex(l)];
  }
  std::vector<std::string> names;
  for (int i = 0; i < kNumRetainedFeatures; ++i) {
    names.emplace_back(FeatureName(kFirstRetainedFeature + i));
  }
  std::vector<std::string> classes;
  for (ModulationLabel l : model.classes) classes.emplace_back(LabelName(l));
  json doc = {{"corpus_id", model.corpus_id},
              {"classes", classes},
              {"corpus_size", model.corpus_size},
              {"feature_order", names},
              {"mean", model.mean},
              {"stddev", model.stddev},
              {"centroids", centroids}};
  return doc.dump(2);
}

CentroidModel CentroidModelFromJson(std::string_view text) {
  CentroidModel model;
  try {
    const json doc = json::parse(text);
    const auto names = doc.at("feature_order").get<std::vector<std::string>>();
    if (names.size() != kNumRetainedFeatures) {
      throw FormatError("centroid model has the wrong number of features");
    }
    for (int i = 0; i < kNumRetainedFeatures; ++i) {
      if (names[i] != FeatureName(kFirstRetainedFeature + i)) {
        throw FormatError(fmt::format("centroid model feature {} is '{}', expected '{}'",
                                      i, names[i], FeatureName(kFirstRetainedFeature + i)));
      }
    }
    model.classes.clear();
    for (const auto& name : doc.at("classes").get<std::vector<std::string>>()) {
      const auto label = ParseLabel(name);
      if (!label) throw FormatError(fmt::format("centroid model: unknown class '{}'", name));
      model.classes.push_back(*label);
    }
    if (model.classes.empty()) throw FormatError("centroid model lists no classes");
    model.corpus_id = doc.at("corpus_id").get<std::string>();
    model.corpus_size = doc.at("corpus_size").get<int64_t>();
    model.mean = doc.at("mean").get<RetainedArray>();
    model.stddev = doc.at("stddev").get<RetainedArray>();
    for (ModulationLabel l : kAllLabels) {
      model.centroids[LabelIndex(l)] =
          doc.at("centroids").at(std::string(LabelName(l))).get<RetainedArray>();
    }
  } catch (const json::exception& ex) {
    throw FormatError(fmt::format("malformed centroid model: {}", ex.what()));
  }
  for (double s : model.stddev) {
    if (!(s > 0)) throw FormatError("centroid model has a non-positive stddev");
  }
  return model;
}

void WriteCentroidModel(const std::filesystem::path& path, const CentroidModel& model) {
  auto out = internal::OpenForWrite(path);
  out << CentroidModelToJson(model) << '\n';
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

CentroidModel ReadCentroidModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open model '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return CentroidModelFromJson(buffer.str());
  } catch (const FormatError& ex) {
    throw FormatError(fmt::format("'{}': {}", path.string(), ex.what()));
  }
}

Shortlist CentroidProvider::Candidates(const ShortlistQuery& query, int k) const {
  if (query.features == nullptr) {
    throw ArgumentError("centroid shortlist needs query features");
  }
  return ShortlistByCentroid(*query.features, model_, k);
}

Shortlist OracleProvider::Candidates(const ShortlistQuery& query, int k) const {
  return OracleShortlist(query.true_label, k, query.seed, universe_);
}

Shortlist FileProvider::Candidates(const ShortlistQuery& query, int k) const {
  ValidateK(k);
  const auto it = shortlists_.find(query.id);
  if (it == shortlists_.end()) {
    throw PipelineError(
        fmt::format("no imported shortlist for query '{}' in {}", query.id, source_));
  }
  Shortlist s = it->second;
  if (s.k() > k) s.candidates.resize(k);
  return s;
}

std::unique_ptr<ShortlistProvider> MakeShortlistProvider(
    std::string_view spec, const CentroidModel* model,
    std::span<const ModulationLabel> universe) {
  if (spec == "centroid") {
    if (model == nullptr) throw ArgumentError("centroid provider needs a trained model");
    return std::make_unique<CentroidProvider>(*model);
  }
  if (spec == "oracle") {
    return std::make_unique<OracleProvider>(
        std::vector<ModulationLabel>(universe.begin(), universe.end()));
  }
  if (spec.starts_with("file:")) {
    const std::string path(spec.substr(5));
    return std::make_unique<FileProvider>(ImportShortlists(path), path);
  }
  throw ArgumentError(fmt::format(
      "unknown shortlist provider '{}' (expected centroid, oracle or file:PATH)", spec));
}

}  // namespace discamc
