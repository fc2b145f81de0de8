#pragma once

#include <cstdint>
#include <random>

namespace coulgas {

// splitmix64 step, used as a mixing function for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream derivation: every task gets an independent generator
// keyed by (seed, stream_id), so results do not depend on worker scheduling.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= 0x517cc1b727220a95ULL * (stream_id + 1);
    std::uint64_t b = std::uint64_t(splitmix64(s));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace coulgas
