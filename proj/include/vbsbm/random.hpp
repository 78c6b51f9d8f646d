#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace vbsbm {

/// Seedable generator with platform-stable output.
///
/// Wraps std::mt19937_64, whose sequence is fixed by the standard, and
/// derives floats and indices from raw 64-bit draws so results do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform on {0, ..., n - 1}; n must be positive.
    std::size_t index(std::size_t n) {
        // Rejection sampling removes modulo bias.
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw = 0;
        do {
            draw = engine_();
        } while (draw >= limit);
        return static_cast<std::size_t>(draw % bound);
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and integer tags.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = splitmix64(base);
    for (const auto t : tags) {
        h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    }
    return h;
}

} // namespace vbsbm
