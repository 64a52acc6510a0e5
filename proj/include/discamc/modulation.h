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

#ifndef DISCAMC_MODULATION_H_
#define DISCAMC_MODULATION_H_

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace discamc {

// The closed set of modulation classes. Enumerator order is the canonical
// label order used for tie-breaking and for every table in reports.
enum class ModulationLabel : uint8_t {
  k4Ask,
  k4Pam,
  k8Ask,
  k16Pam,
  kCpfsk,
  kDqpsk,
  kGfsk,
  kGmsk,
  kOok,
  kOqpsk,
};

inline constexpr int kNumLabels = 10;

inline constexpr std::array<ModulationLabel, kNumLabels> kAllLabels = {
    ModulationLabel::k4Ask, ModulationLabel::k4Pam,  ModulationLabel::k8Ask,
    ModulationLabel::k16Pam, ModulationLabel::kCpfsk, ModulationLabel::kDqpsk,
    ModulationLabel::kGfsk, ModulationLabel::kGmsk,  ModulationLabel::kOok,
    ModulationLabel::kOqpsk,
};

// Prompt spelling, e.g. "4ASK", "OQPSK".
std::string_view LabelName(ModulationLabel label);

// Exact, case-sensitive inverse of LabelName.
std::optional<ModulationLabel> ParseLabel(std::string_view name);

// Like ParseLabel but throws ArgumentError naming the bad value.
ModulationLabel LabelFromString(std::string_view name);

inline int LabelIndex(ModulationLabel label) { return static_cast<int>(label); }

// Sentinel for a segment without injected noise.
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

using Sample = std::complex<float>;

struct IQSegment {
  std::vector<Sample> samples;
  ModulationLabel label = ModulationLabel::k4Ask;
  double snr_db = kNoiselessSnr;
  int sps = 1;

  size_t n() const { return samples.size(); }
};

// Modulator parameters. Linear schemes use a rectangular pulse; GFSK and
// GMSK share a Gaussian frequency pulse.
inline constexpr double kCpfskIndex = 0.5;
inline constexpr double kGmskIndex = 0.5;
inline constexpr double kGfskIndex = 0.35;
inline constexpr double kGaussianBt = 0.3;
inline constexpr int kGaussianSpanSymbols = 4;

inline constexpr int kMinSymbols = 64;
inline constexpr int kMaxSps = 64;
inline constexpr int kDefaultSymbols = 1024;
inline constexpr int kDefaultSps = 8;

// Real amplitude alphabet for the ASK/PAM/OOK family, normalized to unit
// average power. Empty for the other schemes.
std::vector<double> AmplitudeAlphabet(ModulationLabel label);

// Noiseless baseband waveform of n_symbols * sps samples. Requires
// n_symbols >= 64 and 1 <= sps <= 64; deterministic in (label, n_symbols,
// sps, seed).
IQSegment Modulate(ModulationLabel label, int n_symbols, int sps,
                   uint64_t seed);

// Mean of |x|^2.
double MeanPower(const std::vector<Sample>& samples);

// Adds circularly-symmetric complex Gaussian noise of power
// MeanPower(seg) / 10^(snr_db / 10). An infinite snr_db returns the input
// unchanged (apart from the recorded SNR).
IQSegment AddAwgn(const IQSegment& seg, double snr_db, uint64_t seed);

}  // namespace discamc

#endif  // DISCAMC_MODULATION_H_
