#pragma once

#include <cstdint>
#include <random>

namespace fairsched {

/// SplitMix64 finalizer. Used as the documented integer mixing function for
/// deriving independent sub-stream seeds and sweep cell seeds:
///
///     sub-stream seed  = splitmix64(master ^ role_constant)
///     sweep cell seed  = splitmix64(splitmix64(splitmix64(splitmix64(master)
///                        ^ shape_idx) ^ sigma_idx) ^ replication)
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic random source: std::mt19937_64 (bit-exact by the standard)
/// with explicit transforms, so the same seed yields the same draws on every
/// platform. std::*_distribution is avoided on purpose: its algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given mean, via inverse CDF. Non-negative.
    double exponential(double mean);

    /// Standard normal via Box-Muller (fresh pair of uniforms per draw, so
    /// the i-th value does not depend on how many draws happened before in
    /// other streams).
    double normal();

    /// Weibull(shape, scale) via inverse CDF. Strictly positive.
    double weibull(double shape, double scale);

private:
    std::mt19937_64 gen_;
};

} // namespace fairsched
