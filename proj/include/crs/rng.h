// Copyright 2026 The Authors.
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

#ifndef CRS_RNG_H_
#define CRS_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>

namespace crs {

// SplitMix64 finalizer; also used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Per-trial seed: a pure function of the master seed and trial index, so that
// any partition of trials across workers sees the same randomness.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return combine_seed(master, trial);
}

// Sequential generator (SplitMix64). Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), n >= 1. Lemire's multiply-shift with rejection.
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
};

// Independent coin streams keyed by (trial seed, edge id, tag). Coins are
// stateless, so they can be drawn lazily and in any order.
enum class CoinTag : std::uint64_t {
  kActivity = 1,
  kPick = 2,
  kSample = 3,
  kSequence = 4,
  kAdversary = 5,
};

class TrialCoins {
 public:
  explicit TrialCoins(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform(std::int64_t edge, CoinTag tag) const {
    const std::uint64_t key = combine_seed(
        seed_, (static_cast<std::uint64_t>(edge) << 8) ^
                   static_cast<std::uint64_t>(tag));
    return static_cast<double>(key >> 11) * 0x1.0p-53;
  }

  bool flip(std::int64_t edge, CoinTag tag, double p) const {
    return uniform(edge, tag) < p;
  }

  // Seed for the sequential stream of this trial (arrival order, labeling).
  std::uint64_t sequence_seed() const {
    return combine_seed(seed_, static_cast<std::uint64_t>(CoinTag::kSequence));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace crs

#endif  // CRS_RNG_H_
