#pragma once

#include <cstdint>
#include <random>

namespace gkesn::numerics {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from a master
/// seed; the mixing constants are the standard ones from the reference
/// implementation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for stream `index` of a master seed. Distinct indices give
/// decorrelated streams, so work items (trajectories, weight blocks) can be
/// generated independently and in parallel while staying reproducible.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Deterministic uniform generator.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions (std::uniform_real_distribution etc.) do not — their mapping
/// from raw bits to values is implementation-defined. Since reproducibility
/// across toolchains is part of the contract, the mappings are spelled out
/// here instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in {lo, ..., hi} (inclusive).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        // Multiply-shift rejection-free mapping; bias is < 2^-53 per draw,
        // far below anything observable here, and the result is identical on
        // every platform.
        const std::uint64_t span = hi - lo + 1;
        return lo + static_cast<std::uint64_t>(uniform01() * static_cast<double>(span));
    }

    /// Raw 64-bit draw.
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace gkesn::numerics
