#pragma once

#include <cstdint>

namespace fraburgers {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so forcing fields and perturbations are reproducible regardless
// of evaluation order. SplitMix64 finalizer.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
    std::uint64_t z = seed;
    z += 0x9e3779b97f4a7c15ull * (stream + 1);
    z += 0xbf58476d1ce4e5b9ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
    return static_cast<double>(counter_hash(seed, stream, counter) >> 11) *
           0x1.0p-53;
}

}  // namespace fraburgers
