#pragma once

#include <cstdint>

namespace auditgame {

// Small deterministic PRNG (splitmix64). Sampling code owns its own Rng value,
// so results are reproducible regardless of threading or call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream for repeat `index` of a run seeded with `seed`.
    static Rng derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
        r.next_u64();
        return r;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1). 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    long long next_int(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return lo + static_cast<long long>(next_u64());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<long long>(v % span);
    }

private:
    std::uint64_t state_;
};

}  // namespace auditgame
