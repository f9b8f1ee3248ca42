/*
 * Copyright 2026 The specdiff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECDIFF_RNG_HPP
#define SPECDIFF_RNG_HPP

#include <cassert>
#include <cstddef>
#include <cstdint>

namespace specdiff {

// SplitMix64 finalizer. Used both as the generator step and to derive
// independent per-trial seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for trial `index` of a campaign seeded with `seed`:
// mix64(seed ^ mix64(index + golden)).
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

// Deterministic SplitMix64 stream. Range draws use rejection sampling, so
// results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform over [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

  // Uniform over the closed range [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    assert(lo <= hi);
    auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    std::uint64_t off = span == UINT64_MAX ? next() : below(span + 1);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + off);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  // True with probability p, using 53 random bits.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return u < p;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace specdiff

#endif  // SPECDIFF_RNG_HPP
