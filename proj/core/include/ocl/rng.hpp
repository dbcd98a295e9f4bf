#pragma once

#include <cstdint>
#include <random>

namespace ocl {

// splitmix64 finalizer; used to derive independent seed values from a base
// seed plus structured tags (replication index, purpose, cycle).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = mix64(base);
    s = mix64(s ^ (a * 0xd6e8feb86659fd93ULL));
    s = mix64(s ^ (b * 0xa5cb3d1cf42a7d17ULL));
    s = mix64(s ^ (c * 0xc2b2ae3d27d4eb4fULL));
    return s;
}

// Stream purposes, kept stable so seed-paired runs stay reproducible.
namespace stream {
inline constexpr std::uint64_t truth = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t kmeans = 3;
} // namespace stream

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace ocl
