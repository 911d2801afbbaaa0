#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace pathhd {

// Stateless 64-bit finalizer (SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds a sequence of integers into a single stream key.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t key = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) {
        key = mix64(key ^ mix64(p + 0x9e3779b97f4a7c15ULL));
    }
    return key;
}

// FNV-1a over bytes; used to turn a stream name into a key component.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Counter-based generator: the n-th output is a pure function of (key, n),
// so any stream can be reproduced or skipped without replaying others.
//
// Conversions to uniform/normal/sign values are done here rather than with
// <random> distributions, whose outputs are implementation-defined.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    // Stream keyed by a root seed and any number of indices.
    static constexpr CounterRng stream(std::uint64_t seed,
                                       std::initializer_list<std::uint64_t> indices) noexcept {
        std::uint64_t key = derive_key({seed});
        for (std::uint64_t i : indices) key = derive_key({key, i});
        return CounterRng(key);
    }

    // Named substream of a root seed, e.g. stream(seed, "synth/graph").
    static constexpr CounterRng named(std::uint64_t seed, std::string_view name) noexcept {
        return CounterRng(derive_key({seed, hash_name(name)}));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    // Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    // Standard normal via Box-Muller; caches the second variate.
    double normal() noexcept;
    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;
    // +1 or -1 with equal probability.
    int sign() noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace pathhd
