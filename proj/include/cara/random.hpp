#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cara {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Combines a base seed with stream coordinates (batch index, purpose tag, ...)
/// into an independent child seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(base);
    for (auto p : parts) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

// Purpose tags so that data, queries and model fitting never share a stream.
namespace seed_tag {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t queries = 2;
inline constexpr std::uint64_t model = 3;
inline constexpr std::uint64_t sampling = 4;
} // namespace seed_tag

} // namespace cara
