#pragma once

#include <cmath>
#include <cstdint>

namespace hcsel {

// Deterministic counter-free PRNG (xoshiro-style splitmix underneath).
// std::mt19937 + libstdc++ distributions are avoided on purpose: the
// distribution algorithms are implementation-defined and golden-file
// tests need bit-stable streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Warm up so nearby seeds decorrelate.
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Modulo bias is < 2^-40 for the n used here (n << 2^24).
        return n == 0 ? 0 : next_u64() % n;
    }

    // Standard normal via Box-Muller (no cached spare; keeps the stream
    // position independent of call parity).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::uint64_t state_;
};

// Stable stream derivation: mixes a base seed with labels so that e.g.
// every candidate region gets its own reproducible stream regardless of
// evaluation order or thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        std::uint64_t z = h;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed, a);
    h = mix(h, b);
    h = mix(h, c);
    return h;
}

} // namespace hcsel
