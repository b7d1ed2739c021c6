#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"
#include "internal.hpp"

#include <cmath>
#include <limits>

namespace iwsurv {

Weibull::Weibull(WeibullParams p) : p_(p) {
    if (!(p.u > 0.0) || !(p.v > 0.0) || !std::isfinite(p.u) || !std::isfinite(p.v)) {
        throw DomainError("Weibull: u and v must be positive and finite");
    }
}

double Weibull::log_pdf(double x) const {
    detail::require_time(x, "weibull_pdf");
    if (x == 0.0) {
        if (p_.v > 1.0) return -std::numeric_limits<double>::infinity();
        if (p_.v == 1.0) return -std::log(p_.u);
        return std::numeric_limits<double>::infinity();
    }
    const double lr = std::log(x / p_.u);
    return std::log(p_.v / p_.u) + (p_.v - 1.0) * lr - std::exp(p_.v * lr);
}

double Weibull::pdf(double x) const { return std::exp(log_pdf(x)); }

double Weibull::cdf(double x) const {
    detail::require_time(x, "weibull_cdf");
    return -std::expm1(-std::pow(x / p_.u, p_.v));
}

double Weibull::sf(double x) const {
    detail::require_time(x, "weibull_sf");
    return std::exp(-std::pow(x / p_.u, p_.v));
}

double Weibull::hazard(double x) const {
    detail::require_positive_time(x, "weibull_hazard");
    return p_.v / p_.u * std::pow(x / p_.u, p_.v - 1.0);
}

double Weibull::cum_hazard(double x) const {
    detail::require_time(x, "weibull_cum_hazard");
    return std::pow(x / p_.u, p_.v);
}

double Weibull::quantile(double q) const {
    detail::require_probability(q, "weibull_quantile");
    return p_.u * std::pow(-std::log1p(-q), 1.0 / p_.v);
}

double Weibull::moment(int k) const {
    if (k < 1) {
        throw DomainError("weibull_moment: order must be a positive integer");
    }
    return std::pow(p_.u, k) * std::exp(ln_gamma(1.0 + k / p_.v));
}

double Weibull::mrl(double x) const {
    detail::require_time(x, "weibull_mrl");
    if (x == 0.0) return mean();
    return detail::survival_tail_integral([this](double y) { return sf(y); }, x) / sf(x);
}

std::vector<double> Weibull::sample(std::size_t n, RandomStream& rng) const {
    std::vector<double> out(n);
    for (double& x : out) {
        x = p_.u * std::pow(rng.exponential(), 1.0 / p_.v);
    }
    return out;
}

} // namespace iwsurv
