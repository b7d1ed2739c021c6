#include "iwsurv/errors.hpp"
#include "iwsurv/gof.hpp"

#include <cmath>
#include <string>

namespace iwsurv {

FitReport make_fit_report(ModelId family, const Sample& s, int reps, RandomStream& rng,
                          const MonteCarloOptions& options) {
    Model fitted = fit_family(family, s);
    FitReport report{family, fitted, loglik(fitted, s), ad_statistic(s, fitted), std::nullopt, std::nullopt};
    try {
        report.rho_sq = rho_sq_hr(fitted, s);
    } catch (const StatisticError&) {
    }
    if (reps > 0) {
        report.ad_pvalue = ad_pvalue_mc(s, family, reps, rng, options).pvalue;
    }
    return report;
}

SelectionVerdict select_model(const Sample& s, int reps_for_pvalues, RandomStream& rng,
                              const MonteCarloOptions& options) {
    if (s.size() < 3) {
        throw FitError("select_model: sample too small (need at least 3 observations)");
    }
    auto report_for = [&](ModelId family) {
        try {
            return make_fit_report(family, s, reps_for_pvalues, rng, options);
        } catch (const StudyError&) {
            throw;
        } catch (const Error& e) {
            throw FitError("select_model: " + std::string(to_string(family)) + " fit failed: " + e.what());
        }
    };
    FitReport iw = report_for(ModelId::InverseWeibull);
    FitReport ll = report_for(ModelId::LogLogistic);
    const ModelId winner_ad = iw.ad_stat < ll.ad_stat ? ModelId::InverseWeibull : ModelId::LogLogistic;
    const ModelId winner_mll = iw.mll > ll.mll ? ModelId::InverseWeibull : ModelId::LogLogistic;
    return {std::move(iw), std::move(ll), winner_ad, winner_mll, winner_ad == winner_mll};
}

ReplicateOutcome score_replicate(const Sample& s) {
    struct Scores {
        double ad;
        double mll;
    };
    auto score = [&](ModelId family) -> std::optional<Scores> {
        try {
            const Model m = fit_family(family, s);
            const Scores sc{ad_statistic(s, m), loglik(m, s)};
            if (!std::isfinite(sc.ad) || !std::isfinite(sc.mll)) return std::nullopt;
            return sc;
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    const auto iw = score(ModelId::InverseWeibull);
    const auto ll = score(ModelId::LogLogistic);
    if (iw && ll) {
        return {iw->ad < ll->ad, iw->mll > ll->mll, false};
    }
    // A failed fit loses on both criteria; two failures resolve against IW.
    const bool iw_only = iw.has_value() && !ll.has_value();
    return {iw_only, iw_only, true};
}

} // namespace iwsurv
