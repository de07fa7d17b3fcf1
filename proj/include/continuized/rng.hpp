#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace continuized {

/// SplitMix64 finaliser. Used to derive independent seeds from a master seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of run `index` in an ensemble with master seed `master`:
/// mix64(master ^ mix64(index + 1)). Stable across releases; documented for replay.
constexpr std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ mix64(index + 1));
}

/// A single random stream. Thin wrapper over mt19937_64 with sampling helpers whose
/// output depends only on the engine bits (no implementation-defined distributions
/// except the Gaussian).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    /// Uniform on (0, 1].
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    double normal() { return normal_(engine_); }

    /// Index i with probability cumulative[i] - cumulative[i-1]; `cumulative` ends at 1.
    std::size_t categorical(std::span<const double> cumulative) noexcept;

    std::uint64_t bits() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Per-run generator with disjoint streams: one for event times, one for marks
/// (noise draws, sampled edges/coordinates), so toggling noise never shifts the clock.
struct RunRng {
    explicit RunRng(std::uint64_t seed)
        : clock(mix64(seed ^ 0x636C6F636B000000ULL)), marks(mix64(seed ^ 0x6D61726B73000000ULL)) {}

    Stream clock;
    Stream marks;
};

}  // namespace continuized
