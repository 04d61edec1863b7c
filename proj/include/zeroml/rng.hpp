#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace zeroml {

// All randomness goes through mt19937_64, whose output sequence is fixed by the
// standard. Distributions are hand-rolled because the std ones are not.
using Rng = std::mt19937_64;

inline Rng make_rng(std::int64_t seed) { return Rng(static_cast<std::uint64_t>(seed)); }

/// Uniform integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound) - 1;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

template <class T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace zeroml
