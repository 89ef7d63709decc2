#ifndef TOPOVOL_RNG_HPP
#define TOPOVOL_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace topovol {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over arbitrary bytes; also used for output digests.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable seed derivation: one top-level seed, sub-streams named by stage.
// The mapping is independent of evaluation order, so parallel stages and
// replicates always see the same stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage) {
    return splitmix64(base ^ fnv1a64(stage));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage,
                                 std::uint64_t index) {
    return splitmix64(derive_seed(base, stage) + 0x632be59bd9b4e019ULL * (index + 1));
}

} // namespace topovol

#endif
