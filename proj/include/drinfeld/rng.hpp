#pragma once

#include <cstdint>
#include <random>

namespace drinfeld {

// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so bounded sampling is done here to keep results identical across
// standard library implementations.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-sample seed: splitmix64(master ^ splitmix64(index)). Results depend only
// on (master, index), never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index));
}

// Uniform integer in [0, bound) by rejection; bound must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

} // namespace drinfeld
