#include "iwsurv/estimation.hpp"

#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace iwsurv {

namespace {

void require_size(const Sample& s, std::size_t n, const char* where) {
    if (s.size() < n) {
        throw FitError(std::string(where) + ": sample too small (need at least " + std::to_string(n) +
                       " observations)");
    }
}

void require_spread(std::span<const double> x, const char* where) {
    if (x.empty() || x.front() == x.back() ||
        std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        throw FitError(std::string(where) + ": degenerate sample (all observations equal)");
    }
}

double median_of(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

struct MeanSd {
    double mean;
    double sd; // (n - 1) denominator
};

MeanSd mean_sd(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

} // namespace

Weibull weibull_mle(std::span<const double> x) {
    if (x.size() < 2) {
        throw FitError("weibull_mle: sample too small");
    }
    require_spread(x, "weibull_mle");
    const double xmax = *std::max_element(x.begin(), x.end());
    const std::size_t n = x.size();
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0)) {
            throw DomainError("weibull_mle: observations must be positive");
        }
        ly[i] = std::log(x[i] / xmax);
    }
    const double mean_ly = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);

    // Profile score in the shape; values scaled by max(x) so y^v <= 1.
    auto shape_equation = [&](double v) {
        double sw = 0.0;
        double swl = 0.0;
        for (double l : ly) {
            const double w = std::exp(v * l);
            sw += w;
            swl += w * l;
        }
        return swl / sw - 1.0 / v - mean_ly;
    };
    double v;
    try {
        v = find_root(shape_equation, {1e-3, 1e3});
    } catch (const BracketError&) {
        throw FitError("weibull_mle: shape estimate outside [1e-3, 1e3]");
    }
    double sw = 0.0;
    for (double l : ly) sw += std::exp(v * l);
    const double u = xmax * std::pow(sw / static_cast<double>(n), 1.0 / v);
    return Weibull({u, v});
}

InverseWeibull fit_iw_ml(const Sample& s) {
    require_size(s, 3, "fit_iw_ml");
    std::vector<double> reciprocal(s.size());
    std::transform(s.values().begin(), s.values().end(), reciprocal.begin(), [](double t) { return 1.0 / t; });
    const Weibull w = weibull_mle(reciprocal);
    return InverseWeibull({w.params().u, w.params().v});
}

LogLogistic fit_ll_ml(const Sample& s) {
    require_size(s, 3, "fit_ll_ml");
    const auto x = s.values();
    require_spread(x, "fit_ll_ml");
    const MeanSd ms = mean_sd(x);
    const double sigma0 = median_of(x);
    const double gamma0 = std::clamp(1.8 / (ms.sd / ms.mean), 0.5, 50.0);

    std::vector<double> lx(x.size());
    std::transform(x.begin(), x.end(), lx.begin(), [](double t) { return std::log(t); });
    const double sum_lx = std::accumulate(lx.begin(), lx.end(), 0.0);
    const double n = static_cast<double>(x.size());

    auto objective = [&](std::span<const double> p) {
        const double lsigma = p[0];
        const double gamma = std::exp(p[1]);
        // sum ln f = n ln(gamma / sigma) + (gamma - 1) sum ln(t / sigma) - 2 sum ln(1 + (t / sigma)^gamma)
        double tail = 0.0;
        for (double l : lx) {
            const double z = gamma * (l - lsigma);
            tail += z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        }
        return n * (p[1] - lsigma) + (gamma - 1.0) * (sum_lx - n * lsigma) - 2.0 * tail;
    };
    MaximizeOptions options;
    options.initial_step = {0.1, 0.1};
    auto best = maximize(objective, {std::log(sigma0), std::log(gamma0)}, options);

    // Newton polish on the analytic score; the simplex stops at ~sqrt(tol) in the parameters.
    double value = objective(best);
    for (int iter = 0; iter < 20; ++iter) {
        const double u = best[0];
        const double gamma = std::exp(best[1]);
        double sw = 0.0, swz = 0.0, sv = 0.0, svz = 0.0, svzz = 0.0;
        for (double l : lx) {
            const double z = gamma * (l - u);
            const double w = 1.0 / (1.0 + std::exp(-z));
            const double v = w * (1.0 - w);
            sw += w;
            swz += w * z;
            sv += v;
            svz += v * z;
            svzz += v * z * z;
        }
        const double g0 = gamma * (2.0 * sw - n);
        const double g1 = n + gamma * (sum_lx - n * u) - 2.0 * swz;
        const double h00 = -2.0 * gamma * gamma * sv;
        const double h01 = gamma * (2.0 * sw - n) + 2.0 * gamma * svz;
        const double h11 = gamma * (sum_lx - n * u) - 2.0 * (svzz + swz);
        const double det = h00 * h11 - h01 * h01;
        if (!(h00 < 0.0 && det > 0.0)) break;
        const std::vector<double> next{u - (h11 * g0 - h01 * g1) / det, best[1] - (h00 * g1 - h01 * g0) / det};
        const double next_value = objective(next);
        if (!(next_value >= value)) break;
        const bool done = std::abs(next[0] - best[0]) < 1e-15 && std::abs(next[1] - best[1]) < 1e-15;
        best = next;
        value = next_value;
        if (done) break;
    }
    return LogLogistic({std::exp(best[0]), std::exp(best[1])});
}

PolyHazardCoeffs cubic_through_origin(std::span<const double> t, std::span<const double> h) {
    const std::size_t n = t.size();
    if (n < 3 || h.size() != n) {
        throw FitError("cubic_through_origin: need at least 3 points and matching lengths");
    }
    // Modified Gram-Schmidt QR on the columns t, t^2, t^3.
    std::array<std::vector<double>, 3> q;
    std::array<std::array<double, 3>, 3> r{};
    for (int k = 0; k < 3; ++k) {
        q[k].resize(n);
        for (std::size_t i = 0; i < n; ++i) q[k][i] = std::pow(t[i], k + 1);
    }
    for (int k = 0; k < 3; ++k) {
        double original = 0.0;
        for (double v : q[k]) original += v * v;
        original = std::sqrt(original);
        for (int j = 0; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += q[j][i] * q[k][i];
            r[j][k] = dot;
            for (std::size_t i = 0; i < n; ++i) q[k][i] -= dot * q[j][i];
        }
        double norm = 0.0;
        for (double v : q[k]) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 1e-12 * original) || !(original > 0.0)) {
            throw FitError("cubic_through_origin: singular normal equations");
        }
        r[k][k] = norm;
        for (double& v : q[k]) v /= norm;
    }
    std::array<double, 3> qty{};
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i) qty[k] += q[k][i] * h[i];
    }
    std::array<double, 3> c{};
    for (int k = 2; k >= 0; --k) {
        double acc = qty[k];
        for (int j = k + 1; j < 3; ++j) acc -= r[k][j] * c[j];
        c[k] = acc / r[k][k];
    }
    const double t_max = *std::max_element(t.begin(), t.end());
    return {c[0], c[1], c[2], t_max};
}

PolyLsqFit fit_poly_lsq_detail(const Model& reference, int n_points, std::optional<CdfRange> range) {
    if (n_points < 4) {
        throw FitError("fit_poly_lsq: need at least 4 points");
    }
    if (range && !(range->lo > 0.0 && range->lo < range->hi && range->hi < 1.0)) {
        throw DomainError("fit_poly_lsq: probability range must satisfy 0 < lo < hi < 1");
    }
    std::vector<double> t(n_points);
    std::vector<double> h(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double f = range ? range->lo + (range->hi - range->lo) * i / (n_points - 1)
                               : static_cast<double>(i + 1) / (n_points + 1);
        t[i] = quantile(reference, f);
        h[i] = -std::log1p(-f);
    }
    const PolyHazardCoeffs c = cubic_through_origin(t, h);
    double mean = 0.0;
    for (double v : h) mean += v / n_points;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double fitted = t[i] * (c.c1 + t[i] * (c.c2 + t[i] * c.c3));
        ss_res += (h[i] - fitted) * (h[i] - fitted);
        ss_tot += (h[i] - mean) * (h[i] - mean);
    }
    try {
        return {PolyHazard(c), 1.0 - ss_res / ss_tot};
    } catch (const CoefficientError& e) {
        throw FitError(std::string("fit_poly_lsq: fitted cubic is not a valid hazard model: ") + e.what());
    }
}

PolyHazard fit_poly_lsq(const Model& reference, int n_points, std::optional<CdfRange> range) {
    return fit_poly_lsq_detail(reference, n_points, range).model;
}

PolyHazardFit fit_poly_ml(const Sample& s) {
    require_size(s, 4, "fit_poly_ml");
    const auto x = s.values();
    require_spread(x, "fit_poly_ml");
    const std::size_t n = x.size();
    const double horizon = 1.05 * x.back();

    // Work in dimensionless coefficients d_k = c_k horizon^k.
    auto coeffs_of = [horizon](std::span<const double> d) {
        return PolyHazardCoeffs{d[0] / horizon, d[1] / (horizon * horizon),
                                d[2] / (horizon * horizon * horizon), horizon};
    };
    auto objective = [&](std::span<const double> d) {
        const PolyHazardCoeffs c = coeffs_of(d);
        if (!PolyHazard::feasible(c)) {
            return -std::numeric_limits<double>::infinity();
        }
        double value = 0.0;
        for (double t : x) {
            const double h = c.c1 + 2.0 * c.c2 * t + 3.0 * c.c3 * t * t;
            value += std::log(h) - t * (c.c1 + t * (c.c2 + t * c.c3));
        }
        return value;
    };

    std::vector<double> start;
    {
        std::vector<double> hhat(n);
        for (std::size_t i = 0; i < n; ++i) {
            hhat[i] = -std::log1p(-static_cast<double>(i + 1) / static_cast<double>(n + 1));
        }
        try {
            PolyHazardCoeffs c = cubic_through_origin(x, hhat);
            c.t_max = horizon;
            if (PolyHazard::feasible(c)) {
                start = {c.c1 * horizon, c.c2 * horizon * horizon, c.c3 * horizon * horizon * horizon};
            }
        } catch (const FitError&) {
        }
        if (start.empty()) {
            const double rate = static_cast<double>(n) / std::accumulate(x.begin(), x.end(), 0.0);
            start = {rate * horizon, 0.0, 0.0};
        }
    }
    if (!std::isfinite(objective(start))) {
        throw FitError("fit_poly_ml: infeasible starting point");
    }
    MaximizeOptions options;
    const double level = std::max({std::abs(start[0]), std::abs(start[1]), std::abs(start[2])});
    options.initial_step = {0.05 * level, 0.05 * level, 0.05 * level};
    options.max_evaluations = 20000;
    const auto best = maximize(objective, start, options);

    PolyHazard model(coeffs_of(best));
    const double mean_hazard = model.cum_hazard(horizon) / horizon;
    return {model, model.min_hazard_on_horizon() <= 1e-6 * mean_hazard};
}

LogLikelihood loglik_detail(const Model& m, const Sample& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double lp = log_pdf(m, s[i]);
        if (lp == -std::numeric_limits<double>::infinity() || std::isnan(lp)) {
            return {-std::numeric_limits<double>::infinity(), i};
        }
        total += lp;
    }
    return {total, std::nullopt};
}

double loglik(const Model& m, const Sample& s) { return loglik_detail(m, s).value; }

double rho_sq_hr(const Model& m, const Sample& s) {
    const std::size_t n = s.size();
    if (n < 3) {
        throw StatisticError("rho_sq_hr: need at least 3 observations");
    }
    std::vector<double> hhat(n);
    for (std::size_t i = 0; i < n; ++i) {
        hhat[i] = -std::log1p(-static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
    const double mean = std::accumulate(hhat.begin(), hhat.end(), 0.0) / static_cast<double>(n);
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ss_tot += (hhat[i] - mean) * (hhat[i] - mean);
        const double r = hhat[i] - cum_hazard(m, s[i]);
        ss_res += r * r;
    }
    if (!(ss_tot > 0.0)) {
        throw StatisticError("rho_sq_hr: zero total variance");
    }
    return 1.0 - ss_res / ss_tot;
}

Gamma23 sample_gamma23(const Sample& s) {
    const std::size_t n = s.size();
    if (n < 3) {
        throw DomainError("sample_gamma23: need at least 3 observations");
    }
    const auto x = s.values();
    const MeanSd ms = mean_sd(x);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - ms.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (!(m2 > 0.0)) {
        throw StatisticError("sample_gamma23: zero variance");
    }
    return {ms.sd / ms.mean, m3 / std::pow(m2, 1.5)};
}

double mrl_at_sf(const Model& m, double surviving_fraction, const Model& reference) {
    if (!(surviving_fraction > 0.0 && surviving_fraction < 1.0)) {
        throw DomainError("mrl_at_sf: surviving fraction must lie in (0, 1)");
    }
    return mrl(m, quantile(reference, 1.0 - surviving_fraction));
}

double mrl_at_sf(const Model& m, double surviving_fraction) { return mrl_at_sf(m, surviving_fraction, m); }

Model fit_family(ModelId family, const Sample& s) {
    switch (family) {
    case ModelId::InverseWeibull: return fit_iw_ml(s);
    case ModelId::LogLogistic: return fit_ll_ml(s);
    case ModelId::PolyHazard: return fit_poly_ml(s).model;
    case ModelId::Weibull: require_size(s, 3, "weibull_mle"); return weibull_mle(s.values());
    }
    throw DomainError("fit_family: unknown family");
}

} // namespace iwsurv
