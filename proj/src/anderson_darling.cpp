#include "iwsurv/errors.hpp"
#include "iwsurv/gof.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iwsurv {

namespace {

constexpr double kClampLow = 1e-15;
constexpr double kClampHigh = 1.0 - 1e-15;
constexpr double kMaxDiscardFraction = 0.05;

// Marsaglia & Marsaglia (2004), "Evaluating the Anderson-Darling Distribution",
// J. Stat. Software 9(2): limiting distribution and finite-n error term.
double adinf(double z) {
    if (z < 2.0) {
        return std::exp(-1.2337141 / z) / std::sqrt(z) *
               (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z);
    }
    return std::exp(-std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z));
}

double errfix(double n, double x) {
    if (x > 0.8) {
        return (-130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) / n;
    }
    const double c = 0.01265 + 0.1757 / n;
    if (x < c) {
        double t = x / c;
        t = std::sqrt(t) * (1.0 - t) * (49.0 * t - 102.0);
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
    }
    double t = (x - c) / (0.8 - c);
    t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
    return t * (0.04213 + 0.01365 / n) / n;
}

void require_reps(int reps, const char* where) {
    if (reps < 100) {
        throw DomainError(std::string(where) + ": at least 100 replicates are required");
    }
}

} // namespace

ADStatistic ad_statistic_detail(const Sample& s, const std::function<double(double)>& cdf) {
    const std::size_t n = s.size();
    if (n == 0) {
        throw DomainError("ad_statistic: empty sample");
    }
    std::vector<double> u(n);
    bool clamped = false;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(s[i]);
        if (!(f >= kClampLow)) {
            f = kClampLow;
            clamped = true;
        } else if (!(f <= kClampHigh)) {
            f = kClampHigh;
            clamped = true;
        }
        u[i] = f;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
    }
    const double dn = static_cast<double>(n);
    return {-dn - acc / dn, clamped};
}

double ad_statistic(const Sample& s, const std::function<double(double)>& cdf) {
    return ad_statistic_detail(s, cdf).value;
}

double ad_statistic(const Sample& s, const Model& m) {
    return ad_statistic(s, [&m](double t) { return cdf(m, t); });
}

double ad_asymptotic_cdf(double stat) {
    if (!(stat > 0.0)) return 0.0;
    return std::clamp(adinf(stat), 0.0, 1.0);
}

double ad_cdf(std::size_t n, double stat) {
    if (!(stat > 0.0)) return 0.0;
    const double x = adinf(stat);
    return std::clamp(x + errfix(static_cast<double>(n), x), 0.0, 1.0);
}

double ad_known_pvalue(std::size_t n, double stat) { return 1.0 - ad_cdf(n, stat); }

ADResult ad_pvalue_mc(const Sample& s, ModelId family, int reps, RandomStream& rng,
                      const MonteCarloOptions& options) {
    require_reps(reps, "ad_pvalue_mc");
    const Model fitted = fit_family(family, s);
    const double stat = ad_statistic(s, fitted);
    const std::uint64_t key = rng.next_u64();
    const std::size_t n = s.size();

    struct Replicate {
        double stat = 0.0;
        bool ok = false;
    };
    const auto replicates = detail::parallel_map(static_cast<std::size_t>(reps), options.threads,
                                                 [&](std::size_t i) {
        RandomStream r = RandomStream::substream(key, i);
        try {
            const Sample boot(sample(fitted, n, r));
            const Model refit = fit_family(family, boot);
            return Replicate{ad_statistic(boot, refit), true};
        } catch (const Error&) {
            return Replicate{};
        }
    });
    int exceed = 0;
    int kept = 0;
    for (const auto& r : replicates) {
        if (!r.ok) continue;
        ++kept;
        if (r.stat >= stat) ++exceed;
    }
    const int discarded = reps - kept;
    if (discarded > kMaxDiscardFraction * reps) {
        throw StudyError("ad_pvalue_mc: " + std::to_string(discarded) + " of " + std::to_string(reps) +
                         " replicate fits failed");
    }
    return {stat, (1.0 + exceed) / (kept + 1.0), reps, ADMode::FittedParams, discarded};
}

ADResult ad_pvalue_mc_known(const Sample& s, const Model& model, int reps, RandomStream& rng,
                            const MonteCarloOptions& options) {
    require_reps(reps, "ad_pvalue_mc_known");
    const double stat = ad_statistic(s, model);
    const std::uint64_t key = rng.next_u64();
    const std::size_t n = s.size();
    const auto stats = detail::parallel_map(static_cast<std::size_t>(reps), options.threads, [&](std::size_t i) {
        RandomStream r = RandomStream::substream(key, i);
        const Sample boot(sample(model, n, r));
        return ad_statistic(boot, model);
    });
    const auto exceed = std::count_if(stats.begin(), stats.end(), [stat](double a) { return a >= stat; });
    return {stat, (1.0 + static_cast<double>(exceed)) / (reps + 1.0), reps, ADMode::KnownParams, 0};
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) {
        throw DomainError("ks_two_sample: empty sample");
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) {
        throw DomainError("ks_one_sample: empty sample");
    }
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_critical(double alpha, double n_eff) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(n_eff > 0.0)) {
        throw DomainError("ks_critical: need 0 < alpha < 1 and n_eff > 0");
    }
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_eff);
}

} // namespace iwsurv
