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

#ifndef DISCAMC_TESTS_CENTROID_ORACLE_H_
#define DISCAMC_TESTS_CENTROID_ORACLE_H_

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "discamc/eval.h"

namespace discamc::testing {

// Nearest class mean under per-feature scaling by the sample standard
// deviation of the pool, in long double. Distances are measured in raw
// feature units divided by that scale, so the ranking does not depend on
// which normalization the library picked.
class CentroidOracle {
 public:
  explicit CentroidOracle(const std::vector<Query>& pool) {
    std::array<long double, kNumRetainedFeatures> sum{}, sq{};
    std::array<int, kNumLabels> count{};
    for (const auto& q : pool) {
      const auto x = q.data.features.Retained();
      const int c = LabelIndex(q.data.label);
      ++count[c];
      for (int i = 0; i < kNumRetainedFeatures; ++i) {
        sum[i] += x[i];
        means_[c][i] += x[i];
      }
    }
    const long double n = pool.size();
    for (int i = 0; i < kNumRetainedFeatures; ++i) {
      const long double m = sum[i] / n;
      for (const auto& q : pool) {
        const long double d = q.data.features.Retained()[i] - m;
        sq[i] += d * d;
      }
      scale_[i] = std::sqrt(sq[i] / (n - 1));
    }
    for (int c = 0; c < kNumLabels; ++c) {
      present_[c] = count[c] > 0;
      for (auto& v : means_[c]) v = count[c] > 0 ? v / count[c] : 0;
    }
  }

  long double Distance(const FeatureVector& fv, ModulationLabel label) const {
    const auto x = fv.Retained();
    const auto& mu = means_[LabelIndex(label)];
    long double d = 0;
    for (int i = 0; i < kNumRetainedFeatures; ++i) {
      const long double t = (x[i] - mu[i]) / scale_[i];
      d += t * t;
    }
    return d;
  }

  // Nearest among the given label spellings; empty when none is a class.
  std::string Nearest(const FeatureVector& fv, const std::vector<std::string>& options) const {
    std::string best;
    long double best_d = std::numeric_limits<long double>::infinity();
    for (const auto& name : options) {
      const auto label = ParseLabel(name);
      if (!label || !present_[LabelIndex(*label)]) continue;
      const long double d = Distance(fv, *label);
      if (d < best_d) {
        best_d = d;
        best = name;
      }
    }
    return best;
  }

 private:
  std::array<std::array<long double, kNumRetainedFeatures>, kNumLabels> means_{};
  std::array<long double, kNumRetainedFeatures> scale_{};
  std::array<bool, kNumLabels> present_{};
};

// Accuracy of the oracle restricted to each record's prompt options.
inline double RestrictedCentroidAccuracy(const EvalData& data, const EvalReport& report) {
  const CentroidOracle oracle(data.pool);
  int correct = 0;
  for (size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const Query& q = data.queries[i];
    if (oracle.Nearest(q.data.features, r.options) == LabelName(q.data.label)) ++correct;
  }
  return report.records.empty() ? 0.0 : static_cast<double>(correct) / report.records.size();
}

}  // namespace discamc::testing

#endif  // DISCAMC_TESTS_CENTROID_ORACLE_H_
