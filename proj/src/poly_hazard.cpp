#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iwsurv {

namespace {

constexpr int kValidationGrid = 10000;
// Survival level at which the MRL quadrature is truncated.
constexpr double kSurvivalCutoff = 1e-12;

double h_of(const PolyHazardCoeffs& c, double t) { return c.c1 + 2.0 * c.c2 * t + 3.0 * c.c3 * t * t; }

double min_hazard(const PolyHazardCoeffs& c) {
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kValidationGrid; ++i) {
        lowest = std::min(lowest, h_of(c, c.t_max * i / kValidationGrid));
    }
    if (c.c3 != 0.0) {
        const double vertex = -c.c2 / (3.0 * c.c3);
        if (vertex > 0.0 && vertex <= c.t_max) {
            lowest = std::min(lowest, h_of(c, vertex));
        }
    }
    return lowest;
}

} // namespace

bool PolyHazard::feasible(const PolyHazardCoeffs& c) {
    if (!std::isfinite(c.c1) || !std::isfinite(c.c2) || !std::isfinite(c.c3) || !(c.t_max > 0.0) ||
        !std::isfinite(c.t_max)) {
        return false;
    }
    return c.c1 >= 0.0 && min_hazard(c) > 0.0;
}

PolyHazard::PolyHazard(PolyHazardCoeffs c) : c_(c) {
    if (!feasible(c)) {
        throw CoefficientError("PolyHazard: h(t) = c1 + 2 c2 t + 3 c3 t^2 must be positive on (0, t_max]");
    }
}

double PolyHazard::min_hazard_on_horizon() const { return min_hazard(c_); }

double PolyHazard::hazard(double t) const {
    detail::require_positive_time(t, "poly_h");
    return h_of(c_, t);
}

double PolyHazard::cum_hazard(double t) const {
    detail::require_time(t, "poly_H");
    return t * (c_.c1 + t * (c_.c2 + t * c_.c3));
}

double PolyHazard::sf(double t) const { return std::exp(-cum_hazard(t)); }

double PolyHazard::cdf(double t) const { return -std::expm1(-cum_hazard(t)); }

double PolyHazard::log_pdf(double t) const {
    detail::require_time(t, "poly_pdf");
    const double h = h_of(c_, t);
    if (!(h > 0.0)) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(h) - cum_hazard(t);
}

double PolyHazard::pdf(double t) const { return std::exp(log_pdf(t)); }

double PolyHazard::increasing_limit() const {
    // Smallest positive root of 3 c3 t^2 + 2 c2 t + c1.
    const double qa = 3.0 * c_.c3;
    const double qb = 2.0 * c_.c2;
    const double qc = c_.c1;
    double limit = std::numeric_limits<double>::infinity();
    if (qa == 0.0) {
        if (qb < 0.0) limit = -qc / qb;
        return limit;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return limit;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(sq, qb));
    for (double r : {q / qa, q != 0.0 ? qc / q : std::numeric_limits<double>::infinity()}) {
        if (r > 0.0 && r < limit) limit = r;
    }
    return limit;
}

double PolyHazard::quantile(double q) const {
    detail::require_probability(q, "poly_quantile");
    const double target = -std::log1p(-q);
    auto excess = [&](double t) { return cum_hazard(t) - target; };
    const double limit = increasing_limit();
    if (std::isfinite(limit)) {
        if (cum_hazard(limit) < target) {
            throw DomainError("poly_quantile: cumulative hazard never reaches the requested level");
        }
        return find_root(excess, {0.0, limit});
    }
    return find_root(excess, expand_upward(excess, {0.0, c_.t_max}));
}

double PolyHazard::mrl(double t) const {
    detail::require_time(t, "poly_mrl");
    const double cutoff_level = -std::log(kSurvivalCutoff);
    const double limit = increasing_limit();
    if (std::isfinite(limit) && cum_hazard(limit) < cutoff_level) {
        throw MomentError("poly_mrl: survival function does not vanish, mean residual life does not exist");
    }
    auto excess = [&](double x) { return cum_hazard(x) - cutoff_level; };
    const double cut = std::isfinite(limit) ? find_root(excess, {0.0, limit})
                                            : find_root(excess, expand_upward(excess, {0.0, c_.t_max}));
    if (t >= cut) {
        throw DomainError("poly_mrl: t lies beyond the survival cut-off");
    }
    const double s0 = sf(t);
    return integrate([this](double x) { return sf(x); }, t, cut, 1e-12, 1e-16) / s0;
}

std::vector<double> PolyHazard::sample(std::size_t n, RandomStream& rng) const {
    std::vector<double> out(n);
    for (double& t : out) {
        t = quantile(rng.uniform());
    }
    return out;
}

} // namespace iwsurv
