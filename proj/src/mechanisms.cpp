#include "iwsurv/mechanisms.hpp"

#include "iwsurv/errors.hpp"
#include "iwsurv/gof.hpp"
#include "iwsurv/numerics.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>

namespace iwsurv {

namespace {

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

// Trials per substream block in defensive_cdf_empirical.
constexpr std::size_t kTrialBlock = 4096;

} // namespace

void validate(const DeteriorationConfig& c) {
    if (!positive(c.k) || !positive(c.h) || !positive(c.v) || !positive(c.d)) {
        throw DomainError("deterioration: k, h, v and D must be positive");
    }
}

void validate(const StressStrengthConfig& c) {
    if (!positive(c.u) || !positive(c.v) || !positive(c.k) || !positive(c.h)) {
        throw DomainError("stress-strength: u, v, k and h must be positive");
    }
}

void validate(const DefensiveConfig& c) {
    if (!positive(c.beta) || !positive(c.k) || !(c.h > 1.0) || !std::isfinite(c.h)) {
        throw DomainError("defensive: beta and k must be positive and h > 1");
    }
}

IWParams deterioration_iw(const DeteriorationConfig& c) {
    validate(c);
    return {std::pow(c.k / c.d, 1.0 / c.h), c.v * c.h};
}

IWParams stress_strength_iw(const StressStrengthConfig& c) {
    validate(c);
    return {std::pow(c.u / c.k, 1.0 / c.h), c.v * c.h};
}

IWParams defensive_iw(const DefensiveConfig& c) {
    validate(c);
    const double b = c.h - 1.0;
    return {std::pow(c.beta * c.k, -1.0 / b), b};
}

double deterioration_crossing(const DeteriorationConfig& c, double w) {
    if (!positive(w)) throw DomainError("deterioration_crossing: level must be positive");
    return std::pow(c.d / (c.k * w), 1.0 / c.h);
}

double deterioration_index(const DeteriorationConfig& c, double w, double t) {
    return c.k * std::pow(t, c.h) * w;
}

std::vector<Trajectory> simulate_deterioration_paths(const DeteriorationConfig& c, std::size_t n,
                                                     RandomStream& rng) {
    validate(c);
    std::vector<Trajectory> paths(n);
    for (auto& p : paths) {
        p.level = std::pow(rng.exponential(), 1.0 / c.v); // Weibull(1, v)
        p.failure_time = deterioration_crossing(c, p.level);
    }
    return paths;
}

Sample simulate_deterioration(const DeteriorationConfig& c, std::size_t n, RandomStream& rng) {
    std::vector<double> t;
    t.reserve(n);
    for (const auto& p : simulate_deterioration_paths(c, n, rng)) t.push_back(p.failure_time);
    return Sample(std::move(t), "deterioration");
}

double stress_strength_crossing(const StressStrengthConfig& c, double s) {
    if (!positive(s)) throw DomainError("stress_strength_crossing: stress must be positive");
    return std::pow(c.k / s, 1.0 / c.h);
}

double strength_at(const StressStrengthConfig& c, double t) { return c.k * std::pow(t, -c.h); }

std::vector<Trajectory> simulate_stress_strength_paths(const StressStrengthConfig& c, std::size_t n,
                                                       RandomStream& rng) {
    validate(c);
    std::vector<Trajectory> paths(n);
    for (auto& p : paths) {
        p.level = c.u * std::pow(rng.exponential(), 1.0 / c.v); // Weibull(u, v)
        p.failure_time = stress_strength_crossing(c, p.level);
    }
    return paths;
}

Sample simulate_stress_strength(const StressStrengthConfig& c, std::size_t n, RandomStream& rng) {
    std::vector<double> t;
    t.reserve(n);
    for (const auto& p : simulate_stress_strength_paths(c, n, rng)) t.push_back(p.failure_time);
    return Sample(std::move(t), "stress-strength");
}

double defensive_success_probability(const DefensiveConfig& c, double t) {
    validate(c);
    const double threshold = std::pow(c.k, 1.0 / c.h);
    // Relative slack so t = k^{1/h} computed by the caller is accepted.
    if (!(t >= threshold * (1.0 - 1e-12))) {
        throw DomainError("defensive: t must be at least k^(1/h) = " + std::to_string(threshold));
    }
    return std::min(1.0, c.k * std::pow(t, -c.h));
}

double defensive_cdf(const DefensiveConfig& c, double t) {
    defensive_success_probability(c, t);
    return std::exp(-c.beta * c.k * std::pow(t, -(c.h - 1.0)));
}

double defensive_cdf_empirical(const DefensiveConfig& c, double t, std::size_t n, RandomStream& rng,
                               unsigned threads) {
    const double ps = defensive_success_probability(c, t);
    const double mean_attempts = c.beta * t;
    const std::uint64_t key = rng.next_u64();
    const std::size_t blocks = (n + kTrialBlock - 1) / kTrialBlock;
    const auto counts = detail::parallel_map(blocks, threads, [&](std::size_t blk) {
        RandomStream r = RandomStream::substream(key, blk);
        const std::size_t begin = blk * kTrialBlock;
        const std::size_t end = std::min(n, begin + kTrialBlock);
        std::size_t manifest = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t attempts = r.poisson(mean_attempts);
            bool defended = false;
            for (std::uint64_t j = 0; j < attempts && !defended; ++j) {
                defended = r.bernoulli(ps);
            }
            manifest += !defended;
        }
        return manifest;
    });
    std::size_t total = 0;
    for (auto m : counts) total += m;
    return static_cast<double>(total) / static_cast<double>(n);
}

SeriesCheck defensive_series_check(const DefensiveConfig& c, double t, int terms) {
    if (terms < 0) throw DomainError("defensive_series_check: terms must be nonnegative");
    const double ps = defensive_success_probability(c, t);
    const double mean = c.beta * t;
    const double fail = 1.0 - ps;
    double partial = 0.0;
    double poisson_mass = 0.0;
    for (int n = 0; n <= terms; ++n) {
        const double log_poisson = -mean + n * std::log(mean) - ln_gamma(n + 1.0);
        const double p = std::exp(log_poisson);
        poisson_mass += p;
        partial += (n == 0 || fail > 0.0) ? p * std::pow(fail, n) : 0.0;
    }
    const double closed = defensive_cdf(c, t);
    const double tail = std::max(0.0, 1.0 - poisson_mass);
    return {partial, closed, std::abs(closed - partial), tail};
}

MaxStabilityReport max_stability_check(IWParams p, int n_max, std::size_t reps, RandomStream& rng) {
    if (n_max < 1) throw DomainError("max_stability_check: n_max must be at least 1");
    if (reps < 1) throw DomainError("max_stability_check: reps must be positive");
    const InverseWeibull parent(p);
    std::vector<double> maxima(reps);
    for (double& m : maxima) {
        double best = 0.0;
        for (int i = 0; i < n_max; ++i) best = std::max(best, parent.from_uniform(rng.uniform()));
        m = best;
    }
    const IWParams target{p.a * std::pow(static_cast<double>(n_max), -1.0 / p.b), p.b};
    const InverseWeibull target_model(target);
    const Sample s(std::move(maxima), "maxima");
    const double stat = ad_statistic(s, [&](double t) { return target_model.cdf(t); });
    const double pvalue = ad_known_pvalue(s.size(), stat);
    const std::size_t mid = s.size() / 2;
    const double median = s.size() % 2 ? s[mid] : 0.5 * (s[mid - 1] + s[mid]);
    return {target, stat, pvalue, pvalue < 0.01, median, target_model.quantile(0.5)};
}

} // namespace iwsurv
