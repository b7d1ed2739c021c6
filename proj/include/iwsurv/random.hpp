#pragma once

#include <cstdint>
#include <random>

namespace iwsurv {

/// Seeded pseudo-random stream (64-bit Mersenne Twister).
///
/// Uniform variates are built from the raw 64-bit output, so sequences are
/// identical on every standard library. Not thread-safe: give each worker
/// its own stream, normally via substream().
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream keyed by (seed, i, j). The key is mixed with
    /// SplitMix64 so nearby counters give unrelated engine states, and the
    /// result depends on nothing but the three integers.
    static RandomStream substream(std::uint64_t seed, std::uint64_t i, std::uint64_t j = 0);

    /// Raw 64-bit output.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard exponential by inversion.
    double exponential();

    /// Poisson(mean): sequential inversion for mean <= 30, Hormann's
    /// transformed rejection (PTRS) above.
    std::uint64_t poisson(double mean);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

} // namespace iwsurv
