#pragma once
#include <cstdint>
#include <random>

namespace roughpath {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substream for (seed, a, b, c). Samples drawn from it do not
// depend on thread count or evaluation order.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (a + 0x1000000000000001ULL));
    s = splitmix64(s ^ (b + 0x2000000000000003ULL));
    s = splitmix64(s ^ (c + 0x3000000000000005ULL));
    return std::mt19937_64(s);
}

}  // namespace roughpath
