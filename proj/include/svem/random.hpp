#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace svem {

using Rng = std::mt19937_64;

/// Seed used by every entry point when the caller does not pass one.
inline constexpr std::uint64_t kDefaultSeed = 20211108ULL;

/// Stream tags keep independent consumers of a master seed apart.
enum class Stream : std::uint64_t {
    BootstrapWeights = 0x5745494748ULL,
    TrueModel = 0x5452554Full,
    SpaceFilling = 0x534644ULL,
    Noise = 0x4E4F495345ULL,
    Svem = 0x5356454DULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based derivation of a child seed. Children of distinct
/// (stream, index) pairs are statistically independent and do not depend on
/// the order in which they are requested.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    return Rng(derive_seed(master, stream, index));
}

/// Laplace(0, 1) draw by inverse CDF.
inline double draw_laplace(Rng& rng) {
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    double u = unif(rng);
    while (u == -0.5) u = unif(rng);
    const double a = 1.0 - 2.0 * (u < 0 ? -u : u);
    const double mag = -std::log(a);
    return u < 0 ? -mag : mag;
}

}  // namespace svem
