#pragma once

#include <cmath>
#include <cstdint>

namespace conehedge {

/// Counter-based pseudo-random generator (SplitMix64 finalizer over a keyed
/// counter). Output i of stream s under seed q is mix(key(q, s) + i * gamma),
/// so any (seed, stream) pair can be opened in O(1) without touching other
/// streams.
///
/// Stream-splitting rule used throughout the Monte Carlo code: path index p
/// owns the contiguous stream ids [4p, 4p+3]:
///   4p + 0  Gaussian increments
///   4p + 1  barrier-crossing uniforms (primary leg)
///   4p + 2  barrier-crossing uniforms (antithetic leg)
/// Estimates therefore do not depend on thread count or block decomposition.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(mix(seed + kGamma) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

    std::uint64_t next_u64() noexcept { return mix(key_ + kGamma * ++counter_); }

    /// Uniform on (0, 1]; never returns 0 so log(u) is always finite.
    double uniform() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second member of each generated
    /// pair is cached, so a stream yields a fixed sequence independent of
    /// call sites.
    double normal() noexcept {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += kGamma;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t kStreamsPerPath = 4;
    static constexpr std::uint64_t kStreamNormals = 0;
    static constexpr std::uint64_t kStreamKill = 1;
    static constexpr std::uint64_t kStreamKillAnti = 2;

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace conehedge
