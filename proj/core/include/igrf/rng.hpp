#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace igrf {

// All randomness in the toolkit flows through mt19937_64 plus the helpers
// below. The standard pins the mt19937_64 output sequence, but NOT the
// behaviour of <random> distributions, so bounded draws and shuffles are
// hand-rolled to keep runs bit-identical across compilers and platforms.
using Rng = std::mt19937_64;

/// Unbiased draw from [0, n) via rejection sampling. n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t rem = (max % n + 1) % n;
  const std::uint64_t limit = max - rem;  // limit+1 is a multiple of n
  std::uint64_t r = rng();
  while (r > limit) r = rng();
  return r % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates shuffle with a pinned draw sequence.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// First k entries of a random permutation of [0, n). k <= n.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k,
                                                           std::vector<std::size_t>& scratch) {
  if (scratch.size() != n) {
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = i;
  }
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(scratch[i], scratch[j]);
    out[i] = scratch[i];
  }
  return out;
}

}  // namespace igrf
