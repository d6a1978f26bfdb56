#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace adprompt {

// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so they are avoided wherever results must be reproducible across toolchains.
// mt19937_64's raw output sequence is fixed by the standard.

// Uniform integer in [0, n) by rejection sampling. n must be positive.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void deterministic_shuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace adprompt
