#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"

#include <cmath>
#include <numbers>

namespace iwsurv {

namespace {

// CV and skewness from the first three raw moments.
Gamma23 from_raw_moments(double m1, double m2, double m3) {
    const double var = m2 - m1 * m1;
    const double third = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    return {std::sqrt(var) / m1, third / std::pow(var, 1.5)};
}

} // namespace

double iw_cv(double b) {
    if (!(b > 2.0)) {
        throw MomentError("iw_cv: coefficient of variation requires b > 2");
    }
    const double g1 = std::exp(ln_gamma(1.0 - 1.0 / b));
    const double g2 = std::exp(ln_gamma(1.0 - 2.0 / b));
    return std::sqrt(g2 - g1 * g1) / g1;
}

Gamma23 iw_gamma23(double b) {
    if (!(b > 2.0)) {
        throw MomentError("iw_gamma23: neither coefficient of variation nor skewness exists for b <= 2");
    }
    if (!(b > 3.0)) {
        throw MomentError("iw_gamma23: skewness does not exist for b <= 3");
    }
    return from_raw_moments(std::exp(ln_gamma(1.0 - 1.0 / b)), std::exp(ln_gamma(1.0 - 2.0 / b)),
                            std::exp(ln_gamma(1.0 - 3.0 / b)));
}

Gamma23 ll_gamma23(double gamma) {
    if (!(gamma > 2.0)) {
        throw MomentError("ll_gamma23: neither coefficient of variation nor skewness exists for gamma <= 2");
    }
    if (!(gamma > 3.0)) {
        throw MomentError("ll_gamma23: skewness does not exist for gamma <= 3");
    }
    auto raw = [gamma](int k) {
        const double theta = k * std::numbers::pi / gamma;
        return theta / std::sin(theta);
    };
    return from_raw_moments(raw(1), raw(2), raw(3));
}

Gamma23 lognormal_gamma23(double shape) {
    if (!(shape > 0.0)) {
        throw DomainError("lognormal_gamma23: shape must be positive");
    }
    const double w = std::expm1(shape * shape);
    return {std::sqrt(w), (w + 3.0) * std::sqrt(w)};
}

} // namespace iwsurv
