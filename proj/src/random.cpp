#include "iwsurv/random.hpp"

#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"

#include <cmath>

namespace iwsurv {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    const std::uint64_t key = mix64(mix64(mix64(seed) ^ i) ^ (j * 0xd1b54a32d192ed03ULL));
    return RandomStream(key);
}

double RandomStream::uniform() {
    // 53 random mantissa bits, offset by half a step to stay off 0 and 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return -std::log(uniform()); }

std::uint64_t RandomStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("poisson: mean must be finite and nonnegative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean <= 30.0) {
        double p = std::exp(-mean);
        double cdf = p;
        const double u = uniform();
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    // PTRS (Hormann 1993).
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::uint64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - ln_gamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

} // namespace iwsurv
