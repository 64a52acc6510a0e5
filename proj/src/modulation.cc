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

#include "discamc/modulation.h"

#include <cmath>
#include <numbers>

#include "discamc/errors.h"
#include "discamc/random.h"
#include "fmt/format.h"

namespace discamc {
namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "4ASK", "4PAM", "8ASK", "16PAM", "CPFSK",
    "DQPSK", "GFSK", "GMSK", "OOK",  "OQPSK",
};

// Symmetric M-level alphabet {±1, ±3, ..., ±(M-1)} scaled to unit power.
std::vector<double> SymmetricLevels(int m) {
  const double scale = std::sqrt((m * m - 1) / 3.0);
  std::vector<double> levels;
  levels.reserve(m);
  for (int i = 0; i < m; ++i) levels.push_back((2 * i - (m - 1)) / scale);
  return levels;
}

std::vector<int> DrawSymbols(Rng& rng, int n_symbols, int alphabet_size) {
  std::uniform_int_distribution<int> dist(0, alphabet_size - 1);
  std::vector<int> symbols(n_symbols);
  for (int& s : symbols) s = dist(rng);
  return symbols;
}

std::vector<Sample> ModulateAmplitude(const std::vector<double>& alphabet,
                                      int n_symbols, int sps, Rng& rng) {
  const auto symbols =
      DrawSymbols(rng, n_symbols, static_cast<int>(alphabet.size()));
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(n_symbols) * sps);
  for (int s : symbols) {
    out.insert(out.end(), sps, Sample(static_cast<float>(alphabet[s]), 0.0f));
  }
  return out;
}

std::vector<Sample> ModulateDqpsk(int n_symbols, int sps, Rng& rng) {
  const auto steps = DrawSymbols(rng, n_symbols, 4);
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(n_symbols) * sps);
  double phase = std::numbers::pi / 4;
  for (int d : steps) {
    phase = std::fmod(phase + d * std::numbers::pi / 2, 2 * std::numbers::pi);
    const auto x = std::polar(1.0, phase);
    out.insert(out.end(), sps,
               Sample(static_cast<float>(x.real()), static_cast<float>(x.imag())));
  }
  return out;
}

std::vector<Sample> ModulateOqpsk(int n_symbols, int sps, Rng& rng) {
  // Q carries one extra leading symbol so the half-symbol delay has data.
  const auto in_phase = DrawSymbols(rng, n_symbols, 2);
  const auto quadrature = DrawSymbols(rng, n_symbols + 1, 2);
  const double a = 1.0 / std::numbers::sqrt2;
  const int delay = sps / 2;
  const size_t n = static_cast<size_t>(n_symbols) * sps;
  std::vector<Sample> out(n);
  for (size_t i = 0; i < n; ++i) {
    const int si = in_phase[i / sps] ? 1 : -1;
    const int sq = quadrature[(i + sps - delay) / sps] ? 1 : -1;
    out[i] = Sample(static_cast<float>(si * a), static_cast<float>(sq * a));
  }
  return out;
}

// Unit-DC-gain Gaussian taps spanning kGaussianSpanSymbols symbols.
std::vector<double> GaussianTaps(int sps) {
  const double sigma = std::sqrt(std::log(2.0)) / (2 * std::numbers::pi * kGaussianBt);
  const int half = kGaussianSpanSymbols * sps / 2;
  std::vector<double> taps(2 * half + 1);
  double sum = 0;
  for (int i = -half; i <= half; ++i) {
    const double t = static_cast<double>(i) / sps;
    taps[i + half] = std::exp(-t * t / (2 * sigma * sigma));
    sum += taps[i + half];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Binary continuous-phase FSK. `gaussian` selects the Gaussian-filtered
// frequency pulse, otherwise the pulse is rectangular over one symbol.
std::vector<Sample> ModulateCpm(int n_symbols, int sps, double index,
                                bool gaussian, Rng& rng) {
  const auto bits = DrawSymbols(rng, n_symbols, 2);
  const size_t n = static_cast<size_t>(n_symbols) * sps;
  std::vector<double> freq(n);
  for (size_t i = 0; i < n; ++i) freq[i] = bits[i / sps] ? 1.0 : -1.0;
  if (gaussian) {
    const auto taps = GaussianTaps(sps);
    const int half = static_cast<int>(taps.size() / 2);
    std::vector<double> filtered(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      double acc = 0;
      for (int j = -half; j <= half; ++j) {
        const auto k = static_cast<long long>(i) - j;
        if (k >= 0 && k < static_cast<long long>(n)) acc += taps[j + half] * freq[k];
      }
      filtered[i] = acc;
    }
    freq = std::move(filtered);
  }
  std::vector<Sample> out(n);
  double phase = 0;
  for (size_t i = 0; i < n; ++i) {
    phase += std::numbers::pi * index * freq[i] / sps;
    phase = std::remainder(phase, 2 * std::numbers::pi);
    out[i] = Sample(static_cast<float>(std::cos(phase)),
                    static_cast<float>(std::sin(phase)));
  }
  return out;
}

}  // namespace

std::string_view LabelName(ModulationLabel label) {
  return kLabelNames[LabelIndex(label)];
}

std::optional<ModulationLabel> ParseLabel(std::string_view name) {
  for (int i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return kAllLabels[i];
  }
  return std::nullopt;
}

ModulationLabel LabelFromString(std::string_view name) {
  if (auto label = ParseLabel(name)) return *label;
  throw ArgumentError(fmt::format("unknown modulation label '{}'", name));
}

std::vector<double> AmplitudeAlphabet(ModulationLabel label) {
  switch (label) {
    case ModulationLabel::k4Ask:
    case ModulationLabel::k4Pam:
      return SymmetricLevels(4);
    case ModulationLabel::k8Ask:
      return SymmetricLevels(8);
    case ModulationLabel::k16Pam:
      return SymmetricLevels(16);
    case ModulationLabel::kOok:
      return {0.0, std::numbers::sqrt2};
    default:
      return {};
  }
}

IQSegment Modulate(ModulationLabel label, int n_symbols, int sps,
                   uint64_t seed) {
  if (n_symbols < kMinSymbols) {
    throw ArgumentError(fmt::format("n_symbols must be >= {}, got {}",
                                    kMinSymbols, n_symbols));
  }
  if (sps < 1 || sps > kMaxSps) {
    throw ArgumentError(
        fmt::format("sps must be in [1, {}], got {}", kMaxSps, sps));
  }
  Rng rng = MakeRng(seed);
  IQSegment seg;
  seg.label = label;
  seg.sps = sps;
  seg.snr_db = kNoiselessSnr;
  switch (label) {
    case ModulationLabel::k4Ask:
    case ModulationLabel::k4Pam:
    case ModulationLabel::k8Ask:
    case ModulationLabel::k16Pam:
    case ModulationLabel::kOok:
      seg.samples = ModulateAmplitude(AmplitudeAlphabet(label), n_symbols, sps, rng);
      break;
    case ModulationLabel::kDqpsk:
      seg.samples = ModulateDqpsk(n_symbols, sps, rng);
      break;
    case ModulationLabel::kOqpsk:
      seg.samples = ModulateOqpsk(n_symbols, sps, rng);
      break;
    case ModulationLabel::kCpfsk:
      seg.samples = ModulateCpm(n_symbols, sps, kCpfskIndex, false, rng);
      break;
    case ModulationLabel::kGfsk:
      seg.samples = ModulateCpm(n_symbols, sps, kGfskIndex, true, rng);
      break;
    case ModulationLabel::kGmsk:
      seg.samples = ModulateCpm(n_symbols, sps, kGmskIndex, true, rng);
      break;
  }
  return seg;
}

double MeanPower(const std::vector<Sample>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0;
  for (const Sample& s : samples) {
    acc += static_cast<double>(s.real()) * s.real() +
           static_cast<double>(s.imag()) * s.imag();
  }
  return acc / static_cast<double>(samples.size());
}

IQSegment AddAwgn(const IQSegment& seg, double snr_db, uint64_t seed) {
  if (seg.samples.empty()) throw ArgumentError("AddAwgn: empty segment");
  if (std::isnan(snr_db)) throw ArgumentError("AddAwgn: snr_db is NaN");
  IQSegment out = seg;
  out.snr_db = snr_db;
  if (std::isinf(snr_db) && snr_db > 0) return out;

  const double noise_power = MeanPower(seg.samples) / std::pow(10.0, snr_db / 10.0);
  std::normal_distribution<double> normal(0.0, std::sqrt(noise_power / 2.0));
  Rng rng = MakeRng(seed);
  for (Sample& s : out.samples) {
    const double re = normal(rng);
    const double im = normal(rng);
    s = Sample(static_cast<float>(s.real() + re), static_cast<float>(s.imag() + im));
  }
  return out;
}

}  // namespace discamc
