#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"
#include "internal.hpp"

#include <cmath>
#include <limits>

namespace iwsurv {

namespace {

// Beyond this (a t)^{-b} the hazard denominator exp{(a t)^{-b}} - 1 overflows
// and the hazard equals the density to double precision.
constexpr double kHazardAsymptoticThreshold = 700.0;

} // namespace

InverseWeibull::InverseWeibull(IWParams p) : p_(p) {
    if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b)) {
        throw DomainError("InverseWeibull: a and b must be positive and finite");
    }
}

double InverseWeibull::log_pdf(double t) const {
    detail::require_time(t, "iw_pdf");
    if (t == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double lat = std::log(p_.a * t);
    return std::log(p_.a * p_.b) - (p_.b + 1.0) * lat - std::exp(-p_.b * lat);
}

double InverseWeibull::pdf(double t) const {
    detail::require_time(t, "iw_pdf");
    if (t == 0.0) {
        return 0.0;
    }
    return std::exp(log_pdf(t));
}

double InverseWeibull::cdf(double t) const {
    detail::require_time(t, "iw_cdf");
    if (t == 0.0) {
        return 0.0;
    }
    return std::exp(-std::pow(p_.a * t, -p_.b));
}

double InverseWeibull::sf(double t) const {
    detail::require_time(t, "iw_sf");
    if (t == 0.0) {
        return 1.0;
    }
    return -std::expm1(-std::pow(p_.a * t, -p_.b));
}

double InverseWeibull::hazard(double t) const {
    detail::require_positive_time(t, "iw_hazard");
    const double x = std::pow(p_.a * t, -p_.b);
    if (x > kHazardAsymptoticThreshold) {
        return pdf(t);
    }
    // a b (a t)^{-(b+1)} / (e^x - 1) = (b / t) x / expm1(x)
    return p_.b / t * x / std::expm1(x);
}

double InverseWeibull::cum_hazard(double t) const {
    detail::require_time(t, "iw_cum_hazard");
    if (t == 0.0) {
        return 0.0;
    }
    const double x = std::pow(p_.a * t, -p_.b);
    if (x > 0.69) {
        return -std::log1p(-std::exp(-x));
    }
    return -std::log(-std::expm1(-x));
}

double InverseWeibull::quantile(double q) const {
    detail::require_probability(q, "iw_quantile");
    return std::pow(-std::log(q), -1.0 / p_.b) / p_.a;
}

double InverseWeibull::from_uniform(double u) const { return std::pow(-std::log(u), -1.0 / p_.b) / p_.a; }

double InverseWeibull::moment(int k) const {
    if (k < 1) {
        throw DomainError("iw_moment: order must be a positive integer");
    }
    if (!(p_.b > k)) {
        throw MomentError("iw_moment: moment of order " + std::to_string(k) + " requires b > " +
                          std::to_string(k));
    }
    return std::pow(p_.a, -k) * std::exp(ln_gamma(1.0 - k / p_.b));
}

double InverseWeibull::variance() const {
    const double m1 = moment(1);
    return moment(2) - m1 * m1;
}

double InverseWeibull::mrl(double t) const {
    if (!(p_.b > 1.0)) {
        throw MomentError("iw_mrl: mean residual life requires b > 1 (mean does not exist)");
    }
    detail::require_positive_time(t, "iw_mrl");
    const double x = std::pow(p_.a * t, -p_.b);
    const double survived = -std::expm1(-x);
    return lower_incomplete_gamma(1.0 - 1.0 / p_.b, x) / p_.a / survived - t;
}

double InverseWeibull::mode() const { return std::pow(p_.b / (p_.b + 1.0), 1.0 / p_.b) / p_.a; }

double InverseWeibull::hazard_upper() const { return std::pow(p_.b, 1.0 / p_.b) / p_.a; }

double InverseWeibull::hazard_peak_residual(double t) const {
    detail::require_positive_time(t, "hazard_peak_residual");
    const double x = std::pow(p_.a * t, -p_.b);
    const double u = std::exp(-x) / t;
    const double v = 1.0 / t - p_.b / (p_.b + 1.0) * x / t;
    return u - v;
}

ShapeSummary InverseWeibull::shape_summary() const {
    ShapeSummary s{};
    s.mode = mode();
    s.hazard_upper = hazard_upper();
    s.hazard_peak =
        find_root([this](double t) { return hazard_peak_residual(t); }, {s.mode, s.hazard_upper});
    if (!(p_.b > 1.0)) {
        s.note = "mean does not exist";
        return s;
    }
    auto excess = [this](double t) { return mrl(t) * hazard(t) - 1.0; };
    double lo = 0.01 * s.mode;
    while (excess(lo) >= 0.0 && lo > 1e-300) {
        lo *= 0.01;
    }
    const Bracket bracket = expand_upward(excess, {lo, s.hazard_upper});
    s.mrl_changepoint = find_root(excess, bracket);
    return s;
}

std::vector<double> InverseWeibull::sample(std::size_t n, RandomStream& rng) const {
    std::vector<double> out(n);
    for (double& t : out) {
        t = from_uniform(rng.uniform());
    }
    return out;
}

} // namespace iwsurv
