#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "internal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace iwsurv {

LogLogistic::LogLogistic(LogLogisticParams p) : p_(p) {
    if (!(p.sigma > 0.0) || !(p.gamma > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.gamma)) {
        throw DomainError("LogLogistic: sigma and gamma must be positive and finite");
    }
}

double LogLogistic::log_pdf(double t) const {
    detail::require_time(t, "ll_pdf");
    if (t == 0.0) {
        if (p_.gamma > 1.0) return -std::numeric_limits<double>::infinity();
        if (p_.gamma == 1.0) return -std::log(p_.sigma);
        return std::numeric_limits<double>::infinity();
    }
    const double lr = std::log(t / p_.sigma);
    return std::log(p_.gamma / p_.sigma) + (p_.gamma - 1.0) * lr - 2.0 * detail::log1p_exp(p_.gamma * lr);
}

double LogLogistic::pdf(double t) const { return std::exp(log_pdf(t)); }

double LogLogistic::cdf(double t) const {
    detail::require_time(t, "ll_cdf");
    if (t == 0.0) return 0.0;
    // 1 / (1 + (t / sigma)^{-gamma})
    return 1.0 / (1.0 + std::pow(t / p_.sigma, -p_.gamma));
}

double LogLogistic::sf(double t) const {
    detail::require_time(t, "ll_sf");
    if (t == 0.0) return 1.0;
    return 1.0 / (1.0 + std::pow(t / p_.sigma, p_.gamma));
}

double LogLogistic::hazard(double t) const {
    detail::require_positive_time(t, "ll_hazard");
    const double r = t / p_.sigma;
    return p_.gamma / p_.sigma * std::pow(r, p_.gamma - 1.0) / (1.0 + std::pow(r, p_.gamma));
}

double LogLogistic::cum_hazard(double t) const {
    detail::require_time(t, "ll_cum_hazard");
    if (t == 0.0) return 0.0;
    return detail::log1p_exp(p_.gamma * std::log(t / p_.sigma));
}

double LogLogistic::quantile(double q) const {
    detail::require_probability(q, "ll_quantile");
    return p_.sigma * std::pow(q / (1.0 - q), 1.0 / p_.gamma);
}

double LogLogistic::moment(int k) const {
    if (k < 1) {
        throw DomainError("ll_moment: order must be a positive integer");
    }
    if (!(p_.gamma > k)) {
        throw MomentError("ll_moment: moment of order " + std::to_string(k) + " requires gamma > " +
                          std::to_string(k));
    }
    const double theta = k * std::numbers::pi / p_.gamma;
    return std::pow(p_.sigma, k) * theta / std::sin(theta);
}

double LogLogistic::mrl(double t) const {
    if (!(p_.gamma > 1.0)) {
        throw MomentError("ll_mrl: mean residual life requires gamma > 1 (mean does not exist)");
    }
    detail::require_time(t, "ll_mrl");
    if (t == 0.0) return mean();
    return detail::survival_tail_integral([this](double x) { return sf(x); }, t) / sf(t);
}

std::vector<double> LogLogistic::sample(std::size_t n, RandomStream& rng) const {
    std::vector<double> out(n);
    for (double& t : out) {
        const double u = rng.uniform();
        t = p_.sigma * std::pow(u / (1.0 - u), 1.0 / p_.gamma);
    }
    return out;
}

} // namespace iwsurv
