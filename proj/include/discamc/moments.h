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

#ifndef DISCAMC_MOMENTS_H_
#define DISCAMC_MOMENTS_H_

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "discamc/modulation.h"

namespace discamc {

using Complex = std::complex<double>;

inline constexpr int kMaxMomentOrder = 8;

// Sample mixed moment M_pq = mean(x^(p-q) * conj(x)^q), computed in a
// single pass without removing the mean. Requires 0 <= q <= p <= 8 and a
// nonempty input.
Complex MixedMoment(std::span<const Complex> samples, int p, int q);

// Mean-removed copy of `samples` in double precision.
std::vector<Complex> RemoveMean(std::span<const Sample> samples);
std::vector<Complex> RemoveMean(std::span<const Complex> samples);

// Moments M20..M80 and the cumulants built from them. Cumulants use the
// zero-mean complex expansions:
//
//   C20 = M20                C21 = M21
//   C40 = M40 - 3 M20^2      C41 = M41 - 3 M20 M21
//   C42 = M42 - |M20|^2 - 2 M21^2
//   C60 = M60 - 15 M20 M40 + 30 M20^3
//   C61 = M61 - 5 M21 M40 - 10 M20 M41 + 30 M20^2 M21
//   C62 = M62 - 6 M20 M42 - 8 M21 M41 - M22 M40 + 6 M20^2 M22 + 24 M21^2 M20
//   C63 = M63 - 9 M21 M42 + 12 M21^3 - 3 M20 M43 - 3 M22 M41
//         + 18 M20 M21 M22
//   C80 = M80 - 35 M40^2 - 28 M60 M20 + 420 M40 M20^2 - 630 M20^4
struct CumulantSet {
  // moment[p][q]; only the (p, q) pairs listed in kMomentOrders are set.
  std::array<std::array<Complex, kMaxMomentOrder + 1>, kMaxMomentOrder + 1> moment{};

  Complex c20, c21, c40, c41, c42, c60, c61, c62, c63, c80;

  Complex M(int p, int q) const { return moment[p][q]; }
};

inline constexpr std::array<std::array<int, 2>, 12> kMomentOrders = {{
    {2, 0}, {2, 1}, {2, 2}, {4, 0}, {4, 1}, {4, 2},
    {4, 3}, {6, 0}, {6, 1}, {6, 2}, {6, 3}, {8, 0},
}};

// Cumulants of already mean-removed samples.
CumulantSet CumulantsOfCentered(std::span<const Complex> centered);

// Removes the sample mean, then computes moments and cumulants.
CumulantSet Cumulants(std::span<const Sample> samples);
CumulantSet Cumulants(std::span<const Complex> samples);

// Population statistics of the instantaneous amplitude |x[n]|. Kurtosis is
// excess kurtosis. Skewness and kurtosis are 0 when the amplitude has zero
// variance.
struct DescriptiveStats {
  double nobs = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  double variance = 0;
  double skewness = 0;
  double kurtosis = 0;
};

DescriptiveStats ComputeDescriptiveStats(std::span<const Sample> samples);
DescriptiveStats ComputeDescriptiveStats(std::span<const Complex> samples);

}  // namespace discamc

#endif  // DISCAMC_MOMENTS_H_
