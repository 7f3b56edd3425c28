// Copyright 2026 The rigsim Authors.
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <unordered_map>
#include <vector>

namespace rigsim {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of the independent stream `stream` under master seed `seed`. Streams
// are keyed by index only, so results never depend on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream * 0x9E3779B97F4A7C15ULL +
                                   0xD1B54A32D192ED03ULL));
}

// Counter-based 64-bit generator: output k is mix64(seed + k * golden).
// Satisfies UniformRandomBitGenerator, so it plugs into <random>.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept
      : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Uniform integer in [0, n). n must be positive.
template <class Gen>
std::uint64_t uniform_index(Gen& gen, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen);
}

// Uniform double in [0, 1).
template <class Gen>
double uniform_unit(Gen& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Bin(trials, p) with the degenerate cases handled exactly.
template <class Gen>
std::int64_t draw_binomial(Gen& gen, std::int64_t trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<std::int64_t>(trials, p)(gen);
}

// `count` distinct values from [0, range), sorted ascending. Partial
// Fisher-Yates over the implicit array 0..range-1; displaced slots are kept
// in a hash map when the draw is sparse, in a dense array otherwise.
template <class Gen>
std::vector<std::uint32_t> sample_distinct(Gen& gen, std::uint64_t count,
                                           std::uint64_t range) {
  std::vector<std::uint32_t> out;
  count = std::min(count, range);
  out.reserve(count);
  if (count == 0) return out;
  if (count * 4 >= range) {
    std::vector<std::uint32_t> slots(range);
    for (std::uint64_t i = 0; i < range; ++i) {
      slots[i] = static_cast<std::uint32_t>(i);
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t j = i + uniform_index(gen, range - i);
      std::swap(slots[i], slots[j]);
      out.push_back(slots[i]);
    }
  } else {
    std::unordered_map<std::uint64_t, std::uint64_t> displaced;
    displaced.reserve(count * 2);
    auto slot = [&](std::uint64_t i) {
      auto it = displaced.find(i);
      return it == displaced.end() ? i : it->second;
    };
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t j = i + uniform_index(gen, range - i);
      const std::uint64_t picked = slot(j);
      displaced[j] = slot(i);
      out.push_back(static_cast<std::uint32_t>(picked));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rigsim
