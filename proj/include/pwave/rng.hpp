// Copyright 2026 The pwave Authors
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

#ifndef PWAVE_RNG_HPP
#define PWAVE_RNG_HPP

#include <cstdint>

namespace pwave::rng {

// Counter-based pseudo-random function. Every random decision in the
// library is a pure function of (seed, stream, counters), so results do
// not depend on evaluation order and are bit-identical across runs and
// any parallel execution schedule.
//
// The mixer is the SplitMix64 finalizer applied after each word is folded
// in with a golden-ratio multiplier. It is not cryptographic; it only has
// to be statistically uniform at simulation scale.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Distinct streams keep independent uses of the same seed uncorrelated.
enum class Stream : std::uint64_t {
  kSourceMap = 1,
  kSignal = 2,
  kStep = 3,
  kPattern = 4,
  kPermutation = 5,
  kDropout = 6,
};

inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t fold(std::uint64_t h, std::uint64_t word) {
  return mix(h + kGolden * (word + 1));
}

inline std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint64_t c0,
                          std::uint64_t c1 = 0, std::uint64_t c2 = 0) {
  std::uint64_t h = mix(seed + kGolden);
  h = fold(h, static_cast<std::uint64_t>(stream));
  h = fold(h, c0);
  h = fold(h, c1);
  h = fold(h, c2);
  return h;
}

// Uniform double in [0, 1), 53 mantissa bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n) via the multiply-shift reduction. Bias is on the
// order of n / 2^64, far below anything a simulation-scale test can see.
inline std::uint64_t bounded(std::uint64_t bits, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace pwave::rng

#endif  // PWAVE_RNG_HPP
