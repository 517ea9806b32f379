#pragma once

#include <cstdint>

namespace sifrk {

/// SplitMix64 generator (Steele, Lea, Flood 2014).  Pinned so that seeded
/// runs reproduce bit-identical fields on every platform; uniform doubles
/// come from the top 53 bits of each output word.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo,hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

}  // namespace sifrk
