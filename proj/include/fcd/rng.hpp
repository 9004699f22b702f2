#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace fcd::rng {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn stream labels into split keys at compile time.
constexpr std::uint64_t label_key(std::string_view label) noexcept {
    std::uint64_t h = UINT64_C(0xCBF29CE484222325);
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= UINT64_C(0x100000001B3);
    }
    return h;
}

/**
 * Counter-based random stream.
 *
 * Output i of a stream with key k is mix64(k + (i+1)·φ), φ the 64-bit golden
 * gamma, so a stream is fully described by its key and position. split(j)
 * derives a child key by hashing (key, j); children with distinct indices are
 * statistically independent, and the same (seed, split path) always yields
 * the same bits. Satisfies UniformRandomBitGenerator.
 */
class Stream {
public:
    using result_type = std::uint64_t;

    constexpr explicit Stream(std::uint64_t seed) noexcept : key_(mix64(seed ^ UINT64_C(0x6A09E667F3BCC909))) {}

    [[nodiscard]] constexpr Stream split(std::uint64_t index) const noexcept {
        Stream child{0};
        child.key_ = mix64(key_ ^ mix64(index + kGamma));
        child.counter_ = 0;
        return child;
    }

    [[nodiscard]] constexpr Stream split(std::string_view label) const noexcept {
        return split(label_key(label));
    }

    constexpr result_type operator()() noexcept {
        counter_ += kGamma;
        return mix64(key_ + counter_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

private:
    static constexpr std::uint64_t kGamma = UINT64_C(0x9E3779B97F4A7C15);

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace fcd::rng
