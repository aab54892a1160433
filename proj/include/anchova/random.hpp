#pragma once

#include <cstdint>
#include <random>

namespace anchova {

/// Engine for all library randomness. Fixed so that seeded output is
/// byte-reproducible across runs and platforms.
using RandomEngine = std::mt19937_64;

/// Engine for sample `index` of a seeded batch; splitting per index keeps
/// parallel and serial sweeps identical.
inline RandomEngine engine_for_sample(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{seed, index ^ std::uint64_t{0x9e3779b97f4a7c15}};
    return RandomEngine(seq);
}

/// Uniform double in [0, 1), derived from the top 53 bits. Avoids
/// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform01(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_signed(RandomEngine& rng) { return 2.0 * uniform01(rng) - 1.0; }

/// Uniform integer in [lo, hi] via rejection-free modulo (bias is
/// negligible for the tiny ranges used here and keeps the stream simple).
inline int uniform_int(RandomEngine& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace anchova
