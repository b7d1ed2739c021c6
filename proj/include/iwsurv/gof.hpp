#pragma once

#include "iwsurv/distributions.hpp"
#include "iwsurv/estimation.hpp"
#include "iwsurv/random.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace iwsurv {

struct ADStatistic {
    double value;
    /// Some F(t_(i)) was 0 or 1 and got clamped to [1e-15, 1 - 1e-15].
    bool clamped;
};

/// Anderson-Darling A_n^2 in its order-statistic form:
///   -n - (1/n) sum_i (2i - 1) [ln F(t_(i)) + ln(1 - F(t_(n+1-i)))].
ADStatistic ad_statistic_detail(const Sample& s, const std::function<double(double)>& cdf);
double ad_statistic(const Sample& s, const std::function<double(double)>& cdf);
double ad_statistic(const Sample& s, const Model& m);

/// Limiting Cdf of A_n^2 for a fully specified null (Marsaglia & Marsaglia 2004).
double ad_asymptotic_cdf(double stat);
/// Same with their finite-n correction.
double ad_cdf(std::size_t n, double stat);
/// 1 - ad_cdf(n, stat).
double ad_known_pvalue(std::size_t n, double stat);

enum class ADMode { KnownParams, FittedParams };

struct ADResult {
    double stat;
    double pvalue;
    int reps;
    ADMode mode;
    /// Replicates whose refit failed (fitted mode only).
    int discarded = 0;
};

/// Options shared by the Monte Carlo routines.
struct MonteCarloOptions {
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

/// Parametric-bootstrap p-value with refitting: fits family to s, then for
/// each replicate draws n points from the fit, refits and recomputes A*^2.
/// p = (1 + #{A*^2 >= A^2}) / (reps + 1) over the kept replicates; more than
/// 5% failed refits raise StudyError.
ADResult ad_pvalue_mc(const Sample& s, ModelId family, int reps, RandomStream& rng,
                      const MonteCarloOptions& options = {});

/// Monte Carlo p-value against fully specified parameters (no refitting).
ADResult ad_pvalue_mc_known(const Sample& s, const Model& model, int reps, RandomStream& rng,
                            const MonteCarloOptions& options = {});

struct SelectionVerdict {
    FitReport iw;
    FitReport ll;
    ModelId winner_ad;  ///< smaller A_n^2; ties go to LogLogistic
    ModelId winner_mll; ///< larger MLL; ties go to LogLogistic
    bool agree;
};

/// Builds the FitReport for one family, with a bootstrap p-value when reps > 0.
FitReport make_fit_report(ModelId family, const Sample& s, int reps, RandomStream& rng,
                          const MonteCarloOptions& options = {});

/// Fits IW and Log-Logistic and applies both selection rules. Throws FitError
/// naming the family that failed.
SelectionVerdict select_model(const Sample& s, int reps_for_pvalues, RandomStream& rng,
                              const MonteCarloOptions& options = {});

/// How replicate substreams are keyed in selection_study.
enum class StreamLayout {
    /// (seed, n index, replicate): every (a, b) cell of a given n sees the
    /// same uniforms, so the cells differ only through the parameters.
    CommonAcrossCells,
    /// (seed, cell index, replicate): cells are statistically independent.
    IndependentCells,
};

struct SelectionStudyConfig {
    std::vector<double> a_list{1.0, 2.0, 3.0};
    std::vector<double> b_list{1.1, 2.1, 3.1, 4.1, 5.1};
    std::vector<int> n_list{10, 30, 50};
    int reps = 1000;
    std::uint64_t seed = 1;
    StreamLayout layout = StreamLayout::CommonAcrossCells;
    unsigned threads = 0;
};

struct StudyCell {
    double a;
    double b;
    int n;
    double p_ad;
    double p_mll;
    double p_both;   ///< both criteria pick IW
    double p_either; ///< at least one criterion picks IW
    int reps;
    /// Replicates where at least one fit failed (scored as a loss for that family).
    int fit_failures;
};

struct StudyAverage {
    int n;
    double p_ad;
    double p_mll;
    double p_both;
    double p_either;
    int cells;
};

struct SelectionStudyResult {
    std::vector<StudyCell> grid;
    std::vector<StudyAverage> averages;
    std::uint64_t seed;
    StreamLayout layout;
};

/// Outcome of one simulated replicate: which criteria picked the IW model.
struct ReplicateOutcome {
    bool iw_wins_ad;
    bool iw_wins_mll;
    bool failed;
};

/// Fits both families to one sample and scores the selection rules.
ReplicateOutcome score_replicate(const Sample& s);

/// Probability of correct selection of the IW model over the (a, b, n) grid.
SelectionStudyResult selection_study(const SelectionStudyConfig& config);

struct PivotalityRow {
    int n;
    std::string index; ///< "P-AD" or "P-MLL"
    double spread;     ///< max - min across (a, b) cells
    double bound;      ///< 3 binomial standard errors at the per-n average
    bool pass;
};

/// Checks that each index varies across the (a, b) cells of every n by no
/// more than three binomial standard errors. Needs >= 2 cells per n.
std::vector<PivotalityRow> pivotality_check(const SelectionStudyResult& result);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> x, std::vector<double> y);
/// One-sample Kolmogorov-Smirnov distance against a continuous Cdf.
double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
/// Asymptotic critical value c(alpha) / sqrt(n_eff) of the KS statistic.
double ks_critical(double alpha, double n_eff);

} // namespace iwsurv
