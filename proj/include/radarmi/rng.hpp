#pragma once

#include <cstdint>
#include <random>

namespace radarmi {

/// Decorrelates a user seed and a task index into an independent stream seed
/// (splitmix64 finalizer), so per-draw streams don't overlap and results
/// don't depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace radarmi
