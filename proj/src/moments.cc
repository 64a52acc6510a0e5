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

#include "discamc/moments.h"

#include <algorithm>
#include <cmath>

#include "discamc/errors.h"
#include "fmt/format.h"

namespace discamc {
namespace {

// x^a * conj(x)^b by repeated multiplication.
Complex PowerProduct(Complex x, int a, int b) {
  Complex out(1.0, 0.0);
  for (int i = 0; i < a; ++i) out *= x;
  const Complex xc = std::conj(x);
  for (int i = 0; i < b; ++i) out *= xc;
  return out;
}

template <typename T>
std::vector<Complex> RemoveMeanImpl(std::span<const T> samples) {
  std::vector<Complex> out(samples.begin(), samples.end());
  if (out.empty()) return out;
  Complex mean(0.0, 0.0);
  for (const Complex& x : out) mean += x;
  mean /= static_cast<double>(out.size());
  for (Complex& x : out) x -= mean;
  return out;
}

template <typename T>
DescriptiveStats DescriptiveImpl(std::span<const T> samples) {
  if (samples.empty()) throw ArgumentError("descriptive stats of empty input");
  const size_t n = samples.size();
  std::vector<double> amp(n);
  for (size_t i = 0; i < n; ++i) {
    amp[i] = std::hypot(static_cast<double>(samples[i].real()),
                        static_cast<double>(samples[i].imag()));
  }
  DescriptiveStats s;
  s.nobs = static_cast<double>(n);
  const auto [lo, hi] = std::minmax_element(amp.begin(), amp.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0;
  for (double a : amp) sum += a;
  s.mean = sum / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double a : amp) {
    const double d = a - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.variance = m2;
  if (m2 > 0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

}  // namespace

Complex MixedMoment(std::span<const Complex> samples, int p, int q) {
  if (samples.empty()) throw ArgumentError("MixedMoment: empty input");
  if (q < 0 || q > p || p > kMaxMomentOrder) {
    throw ArgumentError(fmt::format(
        "MixedMoment: need 0 <= q <= p <= {}, got p={} q={}", kMaxMomentOrder, p, q));
  }
  Complex acc(0.0, 0.0);
  for (const Complex& x : samples) acc += PowerProduct(x, p - q, q);
  return acc / static_cast<double>(samples.size());
}

std::vector<Complex> RemoveMean(std::span<const Sample> samples) {
  return RemoveMeanImpl(samples);
}

std::vector<Complex> RemoveMean(std::span<const Complex> samples) {
  return RemoveMeanImpl(samples);
}

CumulantSet CumulantsOfCentered(std::span<const Complex> centered) {
  if (centered.empty()) throw ArgumentError("Cumulants: empty input");
  CumulantSet c;
  for (const auto& [p, q] : kMomentOrders) c.moment[p][q] = MixedMoment(centered, p, q);

  const Complex m20 = c.M(2, 0), m21 = c.M(2, 1), m22 = c.M(2, 2);
  const Complex m40 = c.M(4, 0), m41 = c.M(4, 1), m42 = c.M(4, 2), m43 = c.M(4, 3);
  const Complex m60 = c.M(6, 0), m61 = c.M(6, 1), m62 = c.M(6, 2), m63 = c.M(6, 3);
  const Complex m80 = c.M(8, 0);

  c.c20 = m20;
  c.c21 = m21;
  c.c40 = m40 - 3.0 * m20 * m20;
  c.c41 = m41 - 3.0 * m20 * m21;
  c.c42 = m42 - std::norm(m20) - 2.0 * m21 * m21;
  c.c60 = m60 - 15.0 * m20 * m40 + 30.0 * m20 * m20 * m20;
  c.c61 = m61 - 5.0 * m21 * m40 - 10.0 * m20 * m41 + 30.0 * m20 * m20 * m21;
  c.c62 = m62 - 6.0 * m20 * m42 - 8.0 * m21 * m41 - m22 * m40 +
          6.0 * m20 * m20 * m22 + 24.0 * m21 * m21 * m20;
  c.c63 = m63 - 9.0 * m21 * m42 + 12.0 * m21 * m21 * m21 - 3.0 * m20 * m43 -
          3.0 * m22 * m41 + 18.0 * m20 * m21 * m22;
  c.c80 = m80 - 35.0 * m40 * m40 - 28.0 * m60 * m20 + 420.0 * m40 * m20 * m20 -
          630.0 * m20 * m20 * m20 * m20;
  return c;
}

CumulantSet Cumulants(std::span<const Sample> samples) {
  const auto centered = RemoveMean(samples);
  return CumulantsOfCentered(centered);
}

CumulantSet Cumulants(std::span<const Complex> samples) {
  const auto centered = RemoveMean(samples);
  return CumulantsOfCentered(centered);
}

DescriptiveStats ComputeDescriptiveStats(std::span<const Sample> samples) {
  return DescriptiveImpl(samples);
}

DescriptiveStats ComputeDescriptiveStats(std::span<const Complex> samples) {
  return DescriptiveImpl(samples);
}

}  // namespace discamc
