#pragma once

#include <cstdint>

namespace patrol::detail {

// Counter-mode generator: output k is a bijective mix of seed-derived state
// plus k times the golden-ratio increment (splitmix64). Each (seed, stream)
// pair yields an independent sequence, so per-trial streams are reproducible
// regardless of how trials are partitioned across threads.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // uniform in [0, 1), 53 mantissa bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace patrol::detail
