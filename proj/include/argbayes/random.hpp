#pragma once

#include <cstdint>
#include <random>

namespace argbayes {

// Generator used by every randomized routine. mt19937_64 output is fixed by
// the standard, so a seed reproduces the same stream on every platform.
using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for substream `stream` of `master` (chains, repeats, dataset draws).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream = 0) { return Rng(derive_seed(master, stream)); }

// Uniform double in [0, 1) from the top 53 bits; avoids the library-defined
// std::uniform_real_distribution so streams stay portable.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

}  // namespace argbayes
