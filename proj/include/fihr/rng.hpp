#pragma once

#include <cstdint>
#include <random>

namespace fihr {

// Independent substreams of one run seed. Every stochastic draw in a run
// comes from exactly one of these.
enum class Stream : std::uint64_t {
  deployment = 1,
  election = 2,
  faults = 3,
};

/// Portable seeded generator: mt19937_64 (bit-exact across standard
/// libraries) with a hand-rolled 53-bit uniform, since the standard
/// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(std::uint64_t seed, Stream stream)
      : engine_(mix(seed ^ mix(static_cast<std::uint64_t>(stream)))) {}

  // U[0, 1)
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t next_u64() { return engine_(); }

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fihr
