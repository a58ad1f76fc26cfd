// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace xdoc {

// Seeded RNG with explicit draw mappings. The mt19937_64 stream itself is
// pinned by the standard, but the std distributions are not, so every draw
// used by sampling code goes through the methods below. Identical seeds
// give identical sequences everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n), n >= 1. Lemire's
  // multiply-with-rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t cutoff = (0 - range) % range;
      while (low < cutoff) {
        m = static_cast<unsigned __int128>(next_u64()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace xdoc
