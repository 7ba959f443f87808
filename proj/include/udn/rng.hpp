#pragma once

#include <cstdint>
#include <random>

namespace udn {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to decorrelate per-trial seeds derived from
// (master seed, trial index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::int64_t trial) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(trial) + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Unit-mean exponential draw (Rayleigh fading power).
inline double exp_unit(Rng& rng) {
    return std::exponential_distribution<double>(1.0)(rng);
}

inline std::int64_t poisson_count(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::bernoulli_distribution(p)(rng);
}

inline std::int64_t uniform_index(Rng& rng, std::int64_t n) {
    return std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
}

}  // namespace udn
