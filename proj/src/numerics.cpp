#include "iwsurv/numerics.hpp"

#include "iwsurv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>

namespace iwsurv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double ln_gamma_lanczos(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int i = 1; i < 9; ++i) {
        sum += kLanczos[i] / (z + i);
    }
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double ln_gamma_stirling(double x) {
    // x >= 10: the Bernoulli series truncated after x^-9 is below 1e-16.
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double series =
        r * (1.0 / 12.0 -
             r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0)))));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

// s ln x - x for the incomplete gamma prefactor.
double log_prefactor(double s, double x) { return s * std::log(x) - x; }

double lower_gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return std::exp(log_prefactor(s, x)) * sum;
}

// Upper incomplete gamma by modified Lentz evaluation of the continued fraction.
double upper_gamma_continued_fraction(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(log_prefactor(s, x)) * h;
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace

double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be a positive finite number");
    }
    if (x >= 10.0) {
        return ln_gamma_stirling(x);
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - ln_gamma_lanczos(1.0 - x);
    }
    return ln_gamma_lanczos(x);
}

double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("lower_incomplete_gamma: s must be positive");
    }
    if (!(x >= 0.0)) {
        throw DomainError("lower_incomplete_gamma: x must be nonnegative");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x < s + 1.0) {
        return lower_gamma_series(s, x);
    }
    const double complete = std::exp(ln_gamma(s));
    if (std::isinf(x)) {
        return complete;
    }
    return complete - upper_gamma_continued_fraction(s, x);
}

double regularized_lower_gamma(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("regularized_lower_gamma: s must be positive");
    }
    if (!(x >= 0.0)) {
        throw DomainError("regularized_lower_gamma: x must be nonnegative");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    const double lg = ln_gamma(s);
    if (x < s + 1.0) {
        return std::min(1.0, lower_gamma_series(s, x) * std::exp(-lg));
    }
    return std::max(0.0, 1.0 - upper_gamma_continued_fraction(s, x) * std::exp(-lg));
}

double find_root(const std::function<double(double)>& f, Bracket bracket, double tol) {
    if (!(bracket.lo < bracket.hi)) {
        throw BracketError("find_root: bracket requires lo < hi");
    }
    if (!(tol > 0.0)) {
        throw DomainError("find_root: tolerance must be positive");
    }
    double a = bracket.lo;
    double b = bracket.hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0)) {
        throw BracketError("find_root: function does not change sign on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }

    // Brent's zeroin.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < 1000; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            return b;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (!std::isfinite(fb)) {
            throw BracketError("find_root: function became non-finite inside the bracket");
        }
    }
    return b;
}

Bracket expand_upward(const std::function<double(double)>& f, Bracket start, int max_steps) {
    const double flo = f(start.lo);
    double hi = start.hi;
    for (int i = 0; i < max_steps; ++i) {
        const double fhi = f(hi);
        if (std::isfinite(fhi) && (fhi > 0.0) != (flo > 0.0)) {
            return {start.lo, hi};
        }
        hi *= 2.0;
    }
    throw BracketError("expand_upward: no sign change found");
}

std::vector<double> maximize(const Objective& f, std::vector<double> start,
                             const MaximizeOptions& options) {
    const std::size_t dim = start.size();
    if (dim == 0) {
        throw DomainError("maximize: empty start vector");
    }
    const double tol = options.tol;
    int evaluations = 0;
    auto cost = [&](const std::vector<double>& x) {
        ++evaluations;
        const double value = f(x);
        return std::isfinite(value) ? -value : std::numeric_limits<double>::infinity();
    };

    double best_cost = cost(start);
    if (!std::isfinite(best_cost)) {
        throw DomainError("maximize: objective is not finite at the start point");
    }
    std::vector<double> best = start;

    auto exhausted = [&]() {
        return ConvergenceError("maximize: evaluation cap of " + std::to_string(options.max_evaluations) +
                                    " reached",
                                best, -best_cost);
    };

    std::vector<double> step(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        if (j < options.initial_step.size()) {
            step[j] = options.initial_step[j];
        } else {
            step[j] = best[j] != 0.0 ? 0.05 * std::abs(best[j]) : 0.00025;
        }
    }

    const double xtol = std::sqrt(tol);
    for (int restart = 0; restart < 6; ++restart) {
        const double restart_cost = best_cost;
        std::vector<std::vector<double>> simplex(dim + 1, best);
        std::vector<double> costs(dim + 1, best_cost);
        for (std::size_t j = 0; j < dim; ++j) {
            simplex[j + 1][j] += step[j];
            costs[j + 1] = cost(simplex[j + 1]);
        }
        std::vector<std::size_t> order(dim + 1);
        std::vector<double> centroid(dim);
        std::vector<double> trial(dim);
        std::vector<double> trial2(dim);

        while (true) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t l, std::size_t r) { return costs[l] < costs[r]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t next_hi = order[dim - 1];
            if (costs[lo] < best_cost) {
                best_cost = costs[lo];
                best = simplex[lo];
            }

            double xspread = 0.0;
            for (std::size_t i = 0; i <= dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    xspread = std::max(xspread, std::abs(simplex[i][j] - simplex[lo][j]) /
                                                    (1.0 + std::abs(simplex[lo][j])));
                }
            }
            const double fspread = costs[hi] - costs[lo];
            if (fspread <= tol * (1.0 + std::abs(costs[lo])) && xspread <= xtol) {
                break;
            }
            if (xspread < 1e-15) {
                break; // collapsed onto the floating-point grid
            }
            if (evaluations >= options.max_evaluations) {
                throw exhausted();
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i == hi) continue;
                for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
            }
            for (double& c : centroid) c /= static_cast<double>(dim);

            for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - simplex[hi][j]);
            const double reflected = cost(trial);
            if (reflected < costs[lo]) {
                for (std::size_t j = 0; j < dim; ++j)
                    trial2[j] = centroid[j] + 2.0 * (centroid[j] - simplex[hi][j]);
                const double expanded = cost(trial2);
                if (expanded < reflected) {
                    simplex[hi] = trial2;
                    costs[hi] = expanded;
                } else {
                    simplex[hi] = trial;
                    costs[hi] = reflected;
                }
                continue;
            }
            if (reflected < costs[next_hi]) {
                simplex[hi] = trial;
                costs[hi] = reflected;
                continue;
            }
            const bool outside = reflected < costs[hi];
            for (std::size_t j = 0; j < dim; ++j) {
                trial2[j] = outside ? centroid[j] + 0.5 * (trial[j] - centroid[j])
                                    : centroid[j] + 0.5 * (simplex[hi][j] - centroid[j]);
            }
            const double contracted = cost(trial2);
            if (contracted < std::min(reflected, costs[hi])) {
                simplex[hi] = trial2;
                costs[hi] = contracted;
                continue;
            }
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i == lo) continue;
                for (std::size_t j = 0; j < dim; ++j)
                    simplex[i][j] = simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]);
                costs[i] = cost(simplex[i]);
            }
        }
        if (restart > 0 && restart_cost - best_cost <= tol * (1.0 + std::abs(best_cost))) {
            break;
        }
        for (std::size_t j = 0; j < dim; ++j) {
            step[j] = best[j] != 0.0 ? 0.01 * std::abs(best[j]) : 0.5 * step[j];
        }
    }
    return best;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 double abs_tol) {
    if (lo == hi) return 0.0;
    if (hi < lo) return -integrate(f, hi, lo, rel_tol, abs_tol);
    std::priority_queue<Segment> pending;
    Segment whole = gauss_kronrod(f, lo, hi);
    double total = whole.value;
    double error = whole.error;
    pending.push(whole);
    constexpr int kMaxSegments = 4000;
    for (int n = 1; n < kMaxSegments && error > std::max(abs_tol, rel_tol * std::abs(total)); ++n) {
        const Segment worst = pending.top();
        pending.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        pending.push(left);
        pending.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running total.
    double sum = 0.0;
    while (!pending.empty()) {
        sum += pending.top().value;
        pending.pop();
    }
    return sum;
}

double integrate_to_infinity(const std::function<double(double)>& f, double lo, double scale,
                             double rel_tol, double abs_tol) {
    if (!(scale > 0.0)) {
        throw DomainError("integrate_to_infinity: scale must be positive");
    }
    auto mapped = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        const double x = lo + scale * u / w;
        const double value = f(x) * scale / (w * w);
        return std::isfinite(value) ? value : 0.0;
    };
    return integrate(mapped, 0.0, 1.0, rel_tol, abs_tol);
}

} // namespace iwsurv
