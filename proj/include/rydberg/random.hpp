#pragma once

// Deterministic seeding and sampling helpers. Every Monte Carlo trial owns a
// child generator derived from (seed, stream index), so serial and chunked
// runs produce identical streams.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rydberg {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701a9f0d1c3ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream));
}

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Number of Bernoulli(p) attempts until the first success (>= 1), sampled by
// inversion.
inline std::uint64_t geometric_attempts(double p, std::mt19937_64& rng) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("geometric attempts need p in (0,1]");
    }
    if (p >= 1.0) return 1;
    double u = uniform01(rng);
    return 1 + std::uint64_t(std::log1p(-u) / std::log1p(-p));
}

inline bool bernoulli(double p, std::mt19937_64& rng) { return uniform01(rng) < p; }

}  // namespace rydberg
