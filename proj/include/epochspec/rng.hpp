#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace epochspec {

/// All randomness flows through an explicitly seeded engine of this type.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of an independent stream identified by (master, indices...).
/// Depends only on its arguments, never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> indices) noexcept {
    std::uint64_t state = mix64(master);
    for (const std::uint64_t index : indices) {
        state = mix64(state ^ mix64(index + 0x632be59bd9b4e019ULL));
    }
    return state;
}

inline Rng make_rng(std::uint64_t seed) {
    return Rng(seed);
}

}  // namespace epochspec
