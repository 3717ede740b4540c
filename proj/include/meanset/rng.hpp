#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace meanset {

// Counter-based pseudo-random numbers.
//
// Monte Carlo results here must be bit-reproducible across runs, platforms,
// and thread counts. The standard <random> distributions are
// implementation-defined, so everything is built on an explicit SplitMix64
// stream: a 64-bit key plus a counter, output = mix(key + counter * gamma).
// Any (trial, n, purpose) tuple can be hashed into its own independent key,
// which lets trials be evaluated in any order or in parallel without
// sequence coupling.

inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Hash a seed together with integer tags into a stream key. Folding each tag
// through mix64 keeps nearby tags (trial 17 vs trial 18) statistically far
// apart.
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(seed + kSplitMixGamma);
    for (std::uint64_t t : tags) {
        h = mix64(h ^ (t + kSplitMixGamma));
    }
    return h;
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kSplitMixGamma); }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double q) { return next_unit() < q; }

    // Standard normal via Box-Muller (the cosine branch only, so one draw
    // consumes exactly two uniforms and the stream layout stays obvious).
    double next_normal() {
        // Shift into (0, 1] so the log argument never hits zero.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace meanset
