// Copyright 2026 The fpplab Authors
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
#include <initializer_list>

namespace fpp {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based derivation: a stateless hash of a key tuple. Every random
/// quantity in the library is derived this way, so values can be replayed
/// from (seed, counters) without sharing generator state.
constexpr std::uint64_t derive_bits(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t lane = 0;
  for (std::uint64_t c : counters) {
    h = mix64(h ^ mix64(c + 0x3c6ef372fe94f82bULL * ++lane));
  }
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Independent seed for trial i of an experiment.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return derive_bits(master, {0x747269616cULL, trial});
}

/// Sequential generator over a derived stream; satisfies
/// UniformRandomBitGenerator so it can drive <random> and std::shuffle.
class StreamRng {
 public:
  using result_type = std::uint64_t;
  constexpr StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  constexpr result_type operator()() noexcept { return derive_bits(seed_, {stream_, counter_++}); }
  constexpr double uniform() noexcept { return unit_interval((*this)()); }
  /// Uniform integer in [0, n), n > 0 (Lemire-style rejection).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace fpp
