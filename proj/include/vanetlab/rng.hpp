#ifndef VANETLAB_RNG_HPP
#define VANETLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace vanetlab {

// splitmix64, used to spread low-entropy seeds before feeding mt19937_64.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent per-node substreams: base stream is seed ^ node_id, then a
// purpose salt separates mobility / MAC / fading / jitter draws so that
// consuming one stream cannot perturb another.
enum class RngPurpose : uint64_t {
    mobility = 0x6d6f62696cULL,
    mac = 0x6d6163ULL,
    fading = 0x66616465ULL,
    jitter = 0x6a697474ULL,
    traffic = 0x74726166ULL,
};

inline std::mt19937_64 make_stream(uint64_t seed, uint64_t node_id, RngPurpose purpose) {
    uint64_t s = splitmix64((seed ^ node_id) + static_cast<uint64_t>(purpose));
    return std::mt19937_64(s);
}

// Portable uniform in [0,1): avoids implementation-defined std distributions
// so identical seeds give identical traces on any platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    return uniform01(rng) < p;
}

// Inclusive range. Modulo bias is irrelevant for simulation-sized ranges.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

}  // namespace vanetlab

#endif
