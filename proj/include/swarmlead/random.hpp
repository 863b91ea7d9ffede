#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace swarmlead {

// Explicit transforms of the raw engine output keep seeded streams identical
// across standard library implementations, unlike <random> distributions.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound), bound > 0.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

} // namespace swarmlead
