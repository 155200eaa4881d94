#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bai/errors.hpp"

namespace bai {

// splitmix64 finalizer. Used for seed mixing everywhere so that trial seeds,
// child streams and cell seeds are stable 64-bit functions of their inputs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Combines a seed with a label. Distinct labels give decorrelated seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) {
  return splitmix64(seed ^ splitmix64(label));
}

// FNV-1a, used to derive stable algorithm ids from names for seed mixing.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic random stream. The draw sequence is a pure function of the
// 64-bit seed: the engine is std::mt19937_64 (fully specified by the
// standard) and all distributions are derived here from raw engine output,
// never from std::*_distribution, whose mappings are implementation-defined.
//
// Each stream must be consumed by one sequential owner at a time.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution. One engine draw.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller. Consumes exactly two engine draws per
  // call; nothing is cached, so interleaving with other draw kinds stays
  // reproducible.
  double normal() {
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Unbiased uniform index in [0, n) by rejection.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw UsageError("uniform_index: n must be positive");
    std::uint64_t bound = n;
    std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

  // Child stream derived from this stream's seed and a label, independent of
  // how much of this stream has been consumed. Distinct labels on the same
  // parent give decorrelated children.
  RandomStream split(std::uint64_t label) const {
    return RandomStream(mix_seed(seed_, label));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace bai
