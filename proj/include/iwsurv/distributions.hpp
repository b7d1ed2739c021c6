#pragma once

#include "iwsurv/random.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace iwsurv {

/// Inverse Weibull parameters: scale a (inverse-time units) and shape b.
struct IWParams {
    double a;
    double b;
};

/// Log-Logistic parameters: scale sigma (time units) and shape gamma.
struct LogLogisticParams {
    double sigma;
    double gamma;
};

/// Two-parameter Weibull with survival exp{-(x/u)^v}.
struct WeibullParams {
    double u;
    double v;
};

/// Coefficients of the cubic cumulative hazard H(t) = c1 t + c2 t^2 + c3 t^3,
/// validated on (0, t_max].
struct PolyHazardCoeffs {
    double c1;
    double c2;
    double c3;
    double t_max;
};

/// Shape landmarks of an Inverse Weibull model.
struct ShapeSummary {
    double mode;            ///< density mode t_m
    double hazard_upper;    ///< t_n, upper end of the hazard-peak bracket
    double hazard_peak;     ///< argmax of the hazard, inside (t_m, t_n)
    std::optional<double> mrl_changepoint; ///< t_0 with m(t_0) h(t_0) = 1
    std::string note;       ///< why mrl_changepoint is absent, if it is
};

/// Coefficient of variation and skewness.
struct Gamma23 {
    double cv;
    double skewness;
};

class InverseWeibull {
public:
    explicit InverseWeibull(IWParams p);

    const IWParams& params() const noexcept { return p_; }

    double pdf(double t) const;
    double log_pdf(double t) const;
    double cdf(double t) const;
    double sf(double t) const;
    double hazard(double t) const;
    double cum_hazard(double t) const;
    double quantile(double q) const;

    /// E{T^k} = a^{-k} Gamma(1 - k/b); MomentError unless b > k.
    double moment(int k) const;
    double mean() const { return moment(1); }
    double variance() const;

    /// Mean residual life at t_R; requires b > 1.
    double mrl(double t) const;

    double mode() const;
    double hazard_upper() const;
    /// U(t) - V(t), whose root on (t_m, t_n) is the hazard maximum.
    double hazard_peak_residual(double t) const;
    ShapeSummary shape_summary() const;

    /// Inversion draws t = (1/a) (-ln U)^{-1/b}, in draw order.
    std::vector<double> sample(std::size_t n, RandomStream& rng) const;
    double from_uniform(double u) const;

private:
    IWParams p_;
};

class LogLogistic {
public:
    explicit LogLogistic(LogLogisticParams p);

    const LogLogisticParams& params() const noexcept { return p_; }

    double pdf(double t) const;
    double log_pdf(double t) const;
    double cdf(double t) const;
    double sf(double t) const;
    double hazard(double t) const;
    double cum_hazard(double t) const;
    double quantile(double q) const;
    /// sigma^k (k pi / gamma) / sin(k pi / gamma); MomentError unless gamma > k.
    double moment(int k) const;
    double mean() const { return moment(1); }
    /// Mean residual life by quadrature of the survival function; gamma > 1.
    double mrl(double t) const;
    std::vector<double> sample(std::size_t n, RandomStream& rng) const;

private:
    LogLogisticParams p_;
};

class Weibull {
public:
    explicit Weibull(WeibullParams p);

    const WeibullParams& params() const noexcept { return p_; }

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    double sf(double x) const;
    double hazard(double x) const;
    double cum_hazard(double x) const;
    double quantile(double q) const;
    double moment(int k) const;
    double mean() const { return moment(1); }
    double mrl(double x) const;
    std::vector<double> sample(std::size_t n, RandomStream& rng) const;

private:
    WeibullParams p_;
};

/// Polynomial cumulative-hazard model. Construction checks h(t) > 0 on a
/// 10^4-point grid over (0, t_max] and at the vertex of h; beyond t_max the
/// cubic form is used as is.
class PolyHazard {
public:
    explicit PolyHazard(PolyHazardCoeffs c);

    const PolyHazardCoeffs& coeffs() const noexcept { return c_; }

    double pdf(double t) const;
    double log_pdf(double t) const;
    double cdf(double t) const;
    double sf(double t) const;
    double hazard(double t) const;
    double cum_hazard(double t) const;
    /// Inverts H(t) = -ln(1 - q) within the range where H keeps increasing.
    double quantile(double q) const;
    /// Mean residual life: quadrature of the survival function from t up to
    /// the cut-off where it drops below 1e-12.
    double mrl(double t) const;
    double mean() const { return mrl(0.0); }
    std::vector<double> sample(std::size_t n, RandomStream& rng) const;

    /// Smallest h over the validation grid and the vertex.
    double min_hazard_on_horizon() const;
    /// True if the coefficients satisfy the positivity condition.
    static bool feasible(const PolyHazardCoeffs& c);

private:
    /// First t > 0 where h stops being positive (infinity if never).
    double increasing_limit() const;

    PolyHazardCoeffs c_;
};

enum class ModelId { InverseWeibull, LogLogistic, PolyHazard, Weibull };

using Model = std::variant<InverseWeibull, LogLogistic, PolyHazard, Weibull>;

std::string_view to_string(ModelId id);
/// Accepts "iw", "ll", "poly", "weibull" and the long names.
ModelId parse_model_id(std::string_view name);

ModelId model_id(const Model& m);

double pdf(const Model& m, double t);
double log_pdf(const Model& m, double t);
double cdf(const Model& m, double t);
double sf(const Model& m, double t);
double hazard(const Model& m, double t);
double cum_hazard(const Model& m, double t);
double quantile(const Model& m, double q);
double mrl(const Model& m, double t);
std::vector<double> sample(const Model& m, std::size_t n, RandomStream& rng);
/// Parameter vector in declaration order: (a, b), (sigma, gamma),
/// (c1, c2, c3, t_max) or (u, v).
std::vector<double> parameters(const Model& m);

/// (CV, skewness) of IW(., b). Scale free. MomentError when b <= 3.
Gamma23 iw_gamma23(double b);
/// CV of IW(., b) alone; needs only b > 2.
double iw_cv(double b);
/// (CV, skewness) of a Log-Logistic with shape gamma; needs gamma > 3.
Gamma23 ll_gamma23(double gamma);
/// (CV, skewness) of a Log-Normal whose logarithm has standard deviation shape.
Gamma23 lognormal_gamma23(double shape);

} // namespace iwsurv
