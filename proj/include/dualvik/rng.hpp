#pragma once

#include <cstdint>
#include <random>

namespace dualvik {

// All randomness in the workbench flows through one of these, seeded
// explicitly. Bounded draws avoid std distributions, whose output is
// implementation-defined; reports must be byte-identical across toolchains.
class RandomSource {
public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform-ish draw in [0, bound); modulo bias is irrelevant at workbench
  // scale and keeps the stream reproducible.
  std::uint64_t below(std::uint64_t bound) {
    return bound ? engine_() % bound : 0;
  }

  bool coin() { return engine_() & 1; }

  // Subset of an n-element set as a bitmask, n <= 63.
  std::uint64_t subset(int n) {
    return n ? engine_() & ((std::uint64_t{1} << n) - 1) : 0;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace dualvik
