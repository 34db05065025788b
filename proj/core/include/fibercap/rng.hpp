#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fibercap {

/// SplitMix64 finalizer; used to derive independent per-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return Engine(derive_seed(seed, stream));
}

/// Circular complex normal with E|z|^2 = variance.
inline std::complex<double> complex_normal(Engine& eng, double variance = 1.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
    const double re = n(eng);
    const double im = n(eng);
    return {re, im};
}

}  // namespace fibercap
