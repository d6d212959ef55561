#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace dnv {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t hash_double(double x) { return std::bit_cast<std::uint64_t>(x); }

/// Folds a sequence of keys into a master seed. Each key goes through a full
/// SplitMix round, so nearby keys (rep 7 vs rep 8) give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = mix64(master);
    for (auto k : keys) s = mix64(s ^ mix64(k));
    return s;
}

/// Uniform draw on the open interval (0,1) from the top 53 bits; the result
/// is bit-identical on every standard library.
inline double uniform_open01(Engine& eng) {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(eng() >> 11) + 0.5) * scale;
}

}  // namespace dnv
