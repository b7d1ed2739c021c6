#pragma once

#include "iwsurv/distributions.hpp"
#include "iwsurv/estimation.hpp"
#include "iwsurv/random.hpp"

#include <cstdint>
#include <vector>

namespace iwsurv {

/// Deterioration index Y(t) = k t^h W with W ~ Weibull(1, v); failure when
/// Y reaches the threshold D.
struct DeteriorationConfig {
    double k;
    double h;
    double v;
    double d;
};

/// Weibull(u, v) stress S against a strength decaying as Z(t) = k t^{-h}.
struct StressStrengthConfig {
    double u;
    double v;
    double k;
    double h;
};

/// Poisson(beta t) defensive attempts, each succeeding with
/// P_S(t) = k t^{-h}; valid for t >= k^{1/h}.
struct DefensiveConfig {
    double beta;
    double k;
    double h;
};

void validate(const DeteriorationConfig& c);
void validate(const StressStrengthConfig& c);
void validate(const DefensiveConfig& c);

/// a = (k / D)^{1/h}, b = v h.
IWParams deterioration_iw(const DeteriorationConfig& c);
/// a = (u / k)^{1/h}, b = v h.
IWParams stress_strength_iw(const StressStrengthConfig& c);
/// b = h - 1, a = (beta k)^{-1/b}.
IWParams defensive_iw(const DefensiveConfig& c);

/// One simulated system: the random level and the time it fails.
struct Trajectory {
    double level;        ///< W for deterioration, S for stress-strength
    double failure_time; ///< T
};

/// First t with k t^h W >= D: T = (D / (k W))^{1/h}.
double deterioration_crossing(const DeteriorationConfig& c, double w);
/// Y(t) = k t^h W.
double deterioration_index(const DeteriorationConfig& c, double w, double t);
std::vector<Trajectory> simulate_deterioration_paths(const DeteriorationConfig& c, std::size_t n,
                                                     RandomStream& rng);
Sample simulate_deterioration(const DeteriorationConfig& c, std::size_t n, RandomStream& rng);

/// First t with Z(t) = k t^{-h} <= S: T = (k / S)^{1/h}.
double stress_strength_crossing(const StressStrengthConfig& c, double s);
/// Z(t) = k t^{-h}.
double strength_at(const StressStrengthConfig& c, double t);
std::vector<Trajectory> simulate_stress_strength_paths(const StressStrengthConfig& c, std::size_t n,
                                                       RandomStream& rng);
Sample simulate_stress_strength(const StressStrengthConfig& c, std::size_t n, RandomStream& rng);

/// P_S(t) = k t^{-h}; DomainError for t < k^{1/h}.
double defensive_success_probability(const DefensiveConfig& c, double t);
/// Closed form F(t) = exp{-beta k t^{-(h-1)}}.
double defensive_cdf(const DefensiveConfig& c, double t);

/// Fraction of n simulated subjects whose defensive attempts up to t all
/// failed (disease manifest). Trials use per-trial substreams of a key drawn
/// from rng, so the result does not depend on the thread count.
double defensive_cdf_empirical(const DefensiveConfig& c, double t, std::size_t n, RandomStream& rng,
                               unsigned threads = 0);

struct SeriesCheck {
    double partial_sum;
    double closed_form;
    double gap;
    /// Poisson(beta t) mass beyond the last term, an upper bound for gap.
    double tail_bound;
};

/// Partial sum of the Poisson mixture over n = 0..terms against the closed form.
SeriesCheck defensive_series_check(const DefensiveConfig& c, double t, int terms);

struct MaxStabilityReport {
    IWParams target;  ///< IW(a n^{-1/b}, b)
    double ad_stat;
    double p_value;   ///< asymptotic known-parameter AD p-value
    bool rejected;    ///< p_value < 0.01
    double median_of_maxima;
    double target_median;
};

/// Draws reps maxima of n_max IW(a, b) variates and tests them against
/// the max-stable target.
MaxStabilityReport max_stability_check(IWParams p, int n_max, std::size_t reps, RandomStream& rng);

} // namespace iwsurv
