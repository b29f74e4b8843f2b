#pragma once

#include <cstdint>
#include <random>

namespace qrom {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Counter-mode PRF: independent 64-bit words from one key.
std::uint64_t prf64(std::uint64_t key, std::uint64_t counter);

// Derive an independent stream seed; used for game-level splitting.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    return prf64(seed, 0xA5A5000000000000ULL ^ label);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Uniform integer in [0, bound) by rejection; bound > 0.
std::uint64_t uniform_below(Rng &rng, std::uint64_t bound);

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(Rng &rng);

} // namespace qrom
