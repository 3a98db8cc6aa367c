// Copyright 2026 The fedrange Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDRANGE_DP_RANDOM_H_
#define FEDRANGE_DP_RANDOM_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace fedrange {

// SplitMix64 finalizer. Used to derive independent stream seeds.
uint64_t MixSeed(uint64_t a, uint64_t b);

// FNV-1a over bytes, then mixed. Stable across platforms and runs.
uint64_t HashString(absl::string_view s);

// Seedable 64-bit randomness source shared by every mechanism. All noise and
// sampling draws go through one of these so experiments replay exactly.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double UniformOpen01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  // A new generator whose stream is determined by this one's seed history and
  // `stream`. Does not advance this generator.
  Rng Derive(uint64_t stream) const;

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fedrange

#endif  // FEDRANGE_DP_RANDOM_H_
