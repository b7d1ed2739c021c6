#include "iwsurv/distributions.hpp"
#include "iwsurv/errors.hpp"
#include "iwsurv/numerics.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace iwsurv {

namespace detail {

double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double survival_tail_integral(const std::function<double(double)>& sf, double t) {
    auto integrand = [&](double s) {
        const double x = t * std::exp(s);
        if (!std::isfinite(x)) return 0.0;
        return sf(x) * x;
    };
    return integrate_to_infinity(integrand, 0.0, 1.0, 1e-12, 1e-300);
}

void require_time(double t, const char* where) {
    if (!(t >= 0.0)) {
        throw DomainError(std::string(where) + ": time must be nonnegative");
    }
}

void require_positive_time(double t, const char* where) {
    if (!(t > 0.0)) {
        throw DomainError(std::string(where) + ": time must be positive");
    }
}

void require_probability(double q, const char* where) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError(std::string(where) + ": probability must lie in (0, 1)");
    }
}

} // namespace detail

std::string_view to_string(ModelId id) {
    switch (id) {
    case ModelId::InverseWeibull: return "IW";
    case ModelId::LogLogistic: return "LogLogistic";
    case ModelId::PolyHazard: return "PolyHazard";
    case ModelId::Weibull: return "Weibull";
    }
    return "unknown";
}

ModelId parse_model_id(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "iw" || lower == "inverseweibull" || lower == "inverse-weibull") return ModelId::InverseWeibull;
    if (lower == "ll" || lower == "loglogistic" || lower == "log-logistic") return ModelId::LogLogistic;
    if (lower == "poly" || lower == "polyhazard") return ModelId::PolyHazard;
    if (lower == "weibull") return ModelId::Weibull;
    throw DomainError("unknown model '" + std::string(name) + "'");
}

ModelId model_id(const Model& m) { return static_cast<ModelId>(m.index()); }

double pdf(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.pdf(t); }, m);
}
double log_pdf(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.log_pdf(t); }, m);
}
double cdf(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.cdf(t); }, m);
}
double sf(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.sf(t); }, m);
}
double hazard(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.hazard(t); }, m);
}
double cum_hazard(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.cum_hazard(t); }, m);
}
double quantile(const Model& m, double q) {
    return std::visit([q](const auto& d) { return d.quantile(q); }, m);
}
double mrl(const Model& m, double t) {
    return std::visit([t](const auto& d) { return d.mrl(t); }, m);
}
std::vector<double> sample(const Model& m, std::size_t n, RandomStream& rng) {
    return std::visit([&](const auto& d) { return d.sample(n, rng); }, m);
}

std::vector<double> parameters(const Model& m) {
    struct Visitor {
        std::vector<double> operator()(const InverseWeibull& d) const { return {d.params().a, d.params().b}; }
        std::vector<double> operator()(const LogLogistic& d) const {
            return {d.params().sigma, d.params().gamma};
        }
        std::vector<double> operator()(const PolyHazard& d) const {
            const auto& c = d.coeffs();
            return {c.c1, c.c2, c.c3, c.t_max};
        }
        std::vector<double> operator()(const Weibull& d) const { return {d.params().u, d.params().v}; }
    };
    return std::visit(Visitor{}, m);
}

} // namespace iwsurv
