#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rstrade {

/// splitmix64 finalizer: a full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// uniform in (0, 1], using the top 53 bits
inline double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Stateless standard normal keyed by (seed, path, step): two chained
/// counter hashes feed one Box-Muller draw (cosine branch). Reproducible
/// under any parallel schedule.
inline double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const std::uint64_t h = mix64(mix64(mix64(seed) ^ path) ^ step);
    const std::uint64_t h2 = mix64(h ^ 0x5851F42D4C957F2DULL);
    const double u1 = unit_open(h);
    const double u2 = unit_open(h2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rstrade
