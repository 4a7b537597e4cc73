#pragma once

#include <cstdint>

namespace asep {

// splitmix64: tiny counter-style generator with a splittable seed, used both
// by the stochastic simulator and to derive independent per-start seeds for
// the multi-start Bethe solver.  No global state anywhere.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }
};

// Deterministic stream seed for worker `index` of a run seeded with `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    return mix.next_u64();
}

}  // namespace asep
