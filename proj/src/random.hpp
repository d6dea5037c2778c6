#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace taudit::detail {

// Portable draws: the standard distributions are implementation-defined, and
// surrogate bands and synthetic series must be reproducible across toolchains.

__extension__ using UWide = unsigned __int128;

/// Uniform integer in [0, bound) via Lemire's multiply-and-reject.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    UWide m = static_cast<UWide>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t floor = (0 - bound) % bound;
        while (low < floor) {
            m = static_cast<UWide>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Fisher-Yates.
template <typename T>
void shuffle(std::span<T> values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    shuffle(std::span<T>(values), rng);
}

/// Uniform double in (0, 1).
inline double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via the Box-Muller transform (one draw per two uniforms).
inline double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform_open(rng);
    const double u2 = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace taudit::detail
