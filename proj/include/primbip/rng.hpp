// rng.hpp
//
// Counter-based randomness. Every random quantity in the library is a pure
// function of a 64-bit master seed and a small tuple of keys, so results do
// not depend on evaluation order or on how trials are spread over threads.
#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace primbip {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a, used to turn stream tags ("start", "perc", ...) into keys.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t v) noexcept {
    return mix64(key + kGolden * (mix64(v + kGolden) | 1ULL));
}

constexpr std::uint64_t derive_key(std::uint64_t key, std::string_view tag) noexcept {
    return derive_key(key, tag_hash(tag));
}

constexpr std::uint64_t derive_key(std::uint64_t key, std::string_view tag, std::uint64_t index) noexcept {
    return derive_key(derive_key(key, tag), index);
}

// Top 53 bits as a double in [0, 1).
constexpr double bits_to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Maps bits into the open interval (0, 1); an exact zero is re-mixed.
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
    while ((bits >> 11) == 0) bits = mix64(bits + kGolden);
    return bits_to_unit(bits);
}

// SplitMix64 stream: a UniformRandomBitGenerator over a counter, usable with
// <random> distributions. Construct one per (seed, purpose, index) substream.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit constexpr Stream(std::uint64_t key) noexcept : state_(key) {}
    constexpr Stream(std::uint64_t seed, std::string_view tag) noexcept : state_(derive_key(seed, tag)) {}
    constexpr Stream(std::uint64_t seed, std::string_view tag, std::uint64_t index) noexcept
        : state_(derive_key(seed, tag, index)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    constexpr double uniform() noexcept { return bits_to_unit((*this)()); }
    constexpr double open_uniform() noexcept { return bits_to_open_unit((*this)()); }

    // Uniform integer in [0, bound) by multiply-shift with rejection.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = (*this)();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace primbip
