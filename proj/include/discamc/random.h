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

#ifndef DISCAMC_RANDOM_H_
#define DISCAMC_RANDOM_H_

#include <cstdint>
#include <random>

namespace discamc {

// Every random stream in the project is a std::mt19937_64 seeded from a
// 64-bit value. Sub-streams are derived with DeriveSeed so that results
// depend only on (master seed, index) and never on evaluation order.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
uint64_t MixSeed(uint64_t x);

// Seed for the index-th child stream of `seed`.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

inline Rng MakeRng(uint64_t seed) { return Rng(MixSeed(seed)); }

}  // namespace discamc

#endif  // DISCAMC_RANDOM_H_
