#pragma once

// All randomness in the toolkit comes from std::mt19937_64, whose output
// sequence is fixed by the standard. Bounded draws and shuffles are done here
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so a seed means the same thing on every toolchain.

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace depnet {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Fisher-Yates shuffle.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace depnet
