#ifndef LLINBO_CORE_RANDOM_HPP
#define LLINBO_CORE_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace llinbo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a sequence of indices into a seed:
///   s_0 = splitmix64(root), s_{k+1} = splitmix64(s_k ^ splitmix64(index_k + 1)).
/// Used as the stream splitting rule (root_seed, replication, iteration, purpose) -> stream.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t index : path)
        s = splitmix64(s ^ splitmix64(index + 1));
    return s;
}

/// Named sub-streams of a per-iteration seed.
enum class Stream : std::uint64_t {
    Warmstart = 1,
    Agent = 2,
    Acquisition = 3,
    Kappa = 4,
    Bernoulli = 5,
    Sampling = 6,
    Llambo = 7,
    Iteration = 8,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept
{
    return derive_seed(seed, {static_cast<std::uint64_t>(stream)});
}

inline double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace llinbo

#endif
