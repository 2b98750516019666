// qlouvain - rng.hpp
// Seeded random streams. Every stochastic choice in the library goes through
// these helpers so results depend only on the seed, not on the standard
// library vendor.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>

namespace qlouvain {

// mt19937_64's output sequence is fixed by the C++ standard; the <random>
// distributions are not, so the few we need live below.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream ids used across the library.
namespace stream {
inline constexpr std::uint64_t generator = 1;
inline constexpr std::uint64_t order = 2;
inline constexpr std::uint64_t simulation = 3;
}  // namespace stream

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(splitmix64(seed ^ splitmix64(stream_id)));
}

// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t limit = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= limit) return x % n;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform_real(rng) < p; }

template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace qlouvain
