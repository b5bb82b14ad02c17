// Copyright 2026 The blgi-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace blgi::sim {

/// SplitMix64 pseudorandom generator (Steele, Lea & Flood 2014).
///
/// Chosen because it is a pure counter mix: the state advances by a fixed
/// odd constant and the output is a bijective scramble of the state, so a
/// 64-bit seed fully determines the stream on every platform. All sampling
/// in this library goes through this generator; the standard <random>
/// distributions are avoided because their outputs are not specified
/// bit-exactly across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Derived stream for worker `index`: seed XOR index. Keeps sharded
  /// sampling reproducible for a fixed worker count.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed ^ index);
  }

 private:
  std::uint64_t state_;
};

/// Well-separated 64-bit seed for sub-task `index` (grid points,
/// sub-experiments). Distinct indices give distinct streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed + index * 0x9E3779B97F4A7C15ULL).next_u64();
}

}  // namespace blgi::sim
