#pragma once

// Counter-based random streams: the draw for (seed, replicate, event) is a
// pure function of its inputs, so results do not depend on how work is
// split across threads.

#include <cmath>
#include <cstdint>

namespace dynbench {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL * (a + 1));
    return mix64(h ^ (0xd1b54a32d192ed03ULL * (b + 1)));
}

// Uniform in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return to_unit(counter_hash(seed, a, b));
}

// Poisson(1) by CDF inversion; the walk terminates quickly since the CDF
// saturates near k = 18 in double precision.
inline int poisson_one(double u) {
    constexpr double kExpNegOne = 0.36787944117144233;
    double p = kExpNegOne;
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < 64) {
        ++k;
        p /= static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace dynbench
