#pragma once

#include <functional>
#include <span>
#include <vector>

namespace iwsurv {

/// Closed search interval [lo, hi] with lo < hi.
struct Bracket {
    double lo;
    double hi;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Lower incomplete gamma function gamma(s, x) = integral_0^x z^{s-1} e^{-z} dz.
///
/// Series expansion below x = s + 1, continued fraction for the complement
/// above it.
double lower_incomplete_gamma(double s, double x);

/// gamma(s, x) / Gamma(s), the Cdf of a unit-scale Gamma(s) variate at x.
double regularized_lower_gamma(double s, double x);

inline constexpr double kRootTolerance = 1e-12;
inline constexpr double kOptimizerTolerance = 1e-10;
inline constexpr int kOptimizerMaxEvaluations = 10000;

/// Brent's method with bisection fallback. Requires f(lo) * f(hi) <= 0 and
/// throws BracketError otherwise. Deterministic: identical inputs give
/// bit-identical results.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol = kRootTolerance);

/// Widens [lo, hi] geometrically toward +infinity until f changes sign.
/// Throws BracketError after max_steps doublings of hi.
Bracket expand_upward(const std::function<double(double)>& f, Bracket start, int max_steps = 200);

using Objective = std::function<double(std::span<const double>)>;

struct MaximizeOptions {
    double tol = kOptimizerTolerance;
    int max_evaluations = kOptimizerMaxEvaluations;
    /// Initial simplex edge per coordinate. Empty: 5% of |x_i|, or 0.00025 for x_i == 0.
    std::vector<double> initial_step;
};

/// Derivative-free local maximization (Nelder-Mead with restarts).
///
/// Points where f is non-finite are treated as infeasible. Throws DomainError
/// if f(start) is not finite and ConvergenceError (carrying the best point)
/// once the evaluation cap is exhausted.
std::vector<double> maximize(const Objective& f, std::vector<double> start,
                             const MaximizeOptions& options = {});

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-11, double abs_tol = 1e-15);

/// Integral of f over [lo, +infinity) via x = lo + scale * u / (1 - u).
double integrate_to_infinity(const std::function<double(double)>& f, double lo, double scale,
                             double rel_tol = 1e-11, double abs_tol = 1e-15);

} // namespace iwsurv
