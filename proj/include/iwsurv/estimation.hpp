#pragma once

#include "iwsurv/distributions.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace iwsurv {

/// Positive observations held in ascending order.
class Sample {
public:
    /// Sorts the values; throws DomainError on non-positive or non-finite entries.
    explicit Sample(std::vector<double> values, std::string name = {});

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::string& name() const noexcept { return name_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Same sample with every value multiplied by c > 0.
    Sample scaled(double c) const;

private:
    std::vector<double> values_;
    std::string name_;
};

/// Reads newline-delimited decimal values; '#' starts a comment and blank
/// lines are skipped. Throws Error if the file cannot be opened and
/// DomainError on a malformed or non-positive entry. May return an empty sample.
Sample read_sample_file(const std::string& path);
/// Writes one value per line with 17 significant digits, so reading the file
/// back gives the identical sample.
void write_sample_file(const Sample& s, const std::string& path);

/// Weibull ML estimate: the profile equation for the shape is solved by
/// bracketed root finding on [1e-3, 1e3]; the scale follows in closed form.
Weibull weibull_mle(std::span<const double> x);

/// Inverse Weibull ML estimate through the Weibull fit of the reciprocals:
/// a = u, b = v.
InverseWeibull fit_iw_ml(const Sample& s);

/// Log-Logistic ML estimate. Starts at sigma = median, gamma = 1.8 / CV
/// clipped to [0.5, 50] and maximizes over (ln sigma, ln gamma).
LogLogistic fit_ll_ml(const Sample& s);

struct PolyHazardFit {
    PolyHazard model;
    /// Fitted h(t) is within 1e-6 (relative to c1) of zero somewhere on the horizon.
    bool boundary_active;
};

/// ML fit of the cubic cumulative hazard with h(t) > 0 enforced on
/// (0, 1.05 max(t)].
PolyHazardFit fit_poly_ml(const Sample& s);

/// Probability levels for fit_poly_lsq. Unset: F_i = i / (n + 1). Set:
/// n points equally spaced on [lo, hi] inclusive.
struct CdfRange {
    double lo;
    double hi;
};

/// Linear least-squares cubic through the origin for H_i = -ln(1 - F_i) on
/// t_i = reference quantile(F_i). t_max is the largest t_i.
PolyHazard fit_poly_lsq(const Model& reference, int n_points, std::optional<CdfRange> range = std::nullopt);

struct PolyLsqFit {
    PolyHazard model;
    /// Coefficient of determination of the regression on its own design points.
    double rho_sq;
};
PolyLsqFit fit_poly_lsq_detail(const Model& reference, int n_points, std::optional<CdfRange> range = std::nullopt);

/// Least-squares core: H on t, cubic through the origin. Throws FitError if
/// the design is rank deficient.
PolyHazardCoeffs cubic_through_origin(std::span<const double> t, std::span<const double> h);

struct LogLikelihood {
    double value;
    /// Index of the first observation with zero density, if any (value is -inf then).
    std::optional<std::size_t> zero_density_at;
};

LogLikelihood loglik_detail(const Model& m, const Sample& s);
double loglik(const Model& m, const Sample& s);

/// Coefficient of determination on the cumulative-hazard scale, with
/// empirical H_i = -ln(1 - i / (n + 1)).
double rho_sq_hr(const Model& m, const Sample& s);

/// Sample CV with the (n-1) standard deviation and skewness m3 / m2^{3/2}
/// from biased central moments.
Gamma23 sample_gamma23(const Sample& s);

/// Mean residual life of m at t_R = reference quantile(1 - R); the model
/// itself is the reference unless one is given.
double mrl_at_sf(const Model& m, double surviving_fraction);
double mrl_at_sf(const Model& m, double surviving_fraction, const Model& reference);

/// Result of fitting one model to one sample.
struct FitReport {
    ModelId model_id;
    Model model;
    double mll;
    double ad_stat;
    std::optional<double> ad_pvalue;
    std::optional<double> rho_sq;
};

/// Maximum-likelihood fit of the given family.
Model fit_family(ModelId family, const Sample& s);

} // namespace iwsurv
