#pragma once

#include <cstdint>

namespace cyclicforge {

/// Seedable, splittable generator (splitmix64 core). Every draw is
/// deterministic for a given seed on every platform, which is what makes
/// generated bundles reproducible from their recorded seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, n).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > 0ULL - n);
        return r;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Independent child stream.
    Rng split() { return Rng(next_u64() ^ 0xA5A5A5A55A5A5A5AULL); }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace cyclicforge
