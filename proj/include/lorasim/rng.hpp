#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lorasim {

// One splitmix64 step; also used as the seed/stream mixing primitive.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Pure function of its inputs; reordering sweep cells or replicates never
// changes the seed any individual run receives.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view strategy,
                                 std::string_view sweep_key, std::uint64_t replicate) {
    std::uint64_t h = master;
    h ^= fnv1a64(strategy);
    splitmix64_next(h);
    h ^= fnv1a64(sweep_key);
    splitmix64_next(h);
    h ^= 0x9e3779b97f4a7c15ull * (replicate + 1);
    std::uint64_t state = h;
    return splitmix64_next(state);
}

// xoshiro256** with hand-rolled variate transforms so that identical seeds
// yield identical streams on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n): bitmask rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }

    // Inverse-CDF; argument of log lies in (0, 1] so the result is finite.
    double exponential(double mean) { return -mean * std::log(1.0 - uniform01()); }

    // Box-Muller without spare caching: one value per call, no hidden state.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
        return mean + stddev * z;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace lorasim
