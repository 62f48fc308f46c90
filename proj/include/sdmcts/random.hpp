#pragma once

#include <cstdint>
#include <random>

namespace sdmcts {

using Rng = std::mt19937_64;

/// splitmix64 step; used to derive independent child seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of `master` (e.g. 0 = data, 1 = search).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace seed_stream {
inline constexpr std::uint64_t data = 0;
inline constexpr std::uint64_t search = 1;
}  // namespace seed_stream

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

}  // namespace sdmcts
