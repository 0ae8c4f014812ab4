#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cef {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based seed splitting: child k of a master seed is
// mix64(master + k * golden).  All samplers, multi-start optimizers and sweep
// cells draw their seeds through this rule, so one master seed reproduces an
// entire run bit for bit.
inline std::uint64_t seed_stream(std::uint64_t master, std::uint64_t stream) {
  return mix64(master + stream * 0x9E3779B97F4A7C15ull);
}

// Fixed stream ids.
inline constexpr std::uint64_t kStreamChain = 1;          // MCMC chain
inline constexpr std::uint64_t kStreamMapStart = 0x100;   // + start index
inline constexpr std::uint64_t kStreamSweepCell = 0x10000;  // + cell index

// Deterministic random source: mt19937_64 with explicit uniform and normal
// conversions, so results do not depend on the standard library's
// distribution implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {  // polar method, no state carried between calls
    for (;;) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cef
