#pragma once

#include <cstdint>
#include <random>

namespace goalinf {

/// All stochastic components draw from explicitly seeded 64-bit Mersenne
/// Twisters; nothing is seeded from the clock.
using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for the `index`-th child stream of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632be59bd9b4e019ull));
}

/// Fresh child generator whose seed is drawn from `parent`.
inline Rng split(Rng& parent) { return Rng(mix_seed(parent())); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace goalinf
