#pragma once

#include <cstdint>
#include <random>

namespace lagsim {

// splitmix64 step; used to derive independent, replicate-addressable streams
// from a master seed so results do not depend on scheduling or thread count.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable 64-bit label for stream (master, a, b, c); same inputs -> same stream.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= 0x243f6a8885a308d3ULL * (a + 1);
    splitmix64(s);
    s ^= 0x13198a2e03707344ULL * (b + 1);
    splitmix64(s);
    s ^= 0xa4093822299f31d0ULL * (c + 1);
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t label) {
    std::uint64_t s = label;
    std::seed_seq seq{static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s))};
    return std::mt19937_64(seq);
}

}  // namespace lagsim
