#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace valor::util {

// Named substream of the single configured seed. Same (seed, name) pair gives
// the same generator on every run and platform (mt19937_64 is specified).
inline std::mt19937_64 substream(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return std::mt19937_64(seed ^ h);
}

// Unbiased integer draw in [0, n); std::uniform_int_distribution is not
// bit-stable across standard libraries, this is.
inline std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace valor::util
