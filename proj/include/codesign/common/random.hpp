#ifndef CODESIGN_COMMON_RANDOM_HPP
#define CODESIGN_COMMON_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace codesign {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed for the substream identified by `path` under `seed`. Substreams with
/// different paths are statistically independent and do not depend on the
/// order in which they are created, so parallel work stays reproducible.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(seed, path));
}

/// Uniform double in [0, 1) built from the top 53 bits. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Standard normal draw (Marsaglia polar method).
double standard_normal(Rng& rng);

} // namespace codesign

#endif
