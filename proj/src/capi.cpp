#include "iwsurv/iwsurv.h"

#include "iwsurv/errors.hpp"
#include "iwsurv/estimation.hpp"
#include "iwsurv/fixtures.hpp"
#include "iwsurv/gof.hpp"
#include "iwsurv/mechanisms.hpp"

#include <algorithm>
#include <cstring>
#include <new>
#include <optional>
#include <string>

struct iws_sample {
    iwsurv::Sample value;
};

struct iws_model {
    iwsurv::Model value;
};

struct iws_rng {
    iwsurv::RandomStream value;
};

struct iws_study {
    iwsurv::SelectionStudyResult value;
    std::optional<std::vector<iwsurv::PivotalityRow>> pivotality;
};

namespace {

using namespace iwsurv;

thread_local std::string g_last_error;

iws_status fail(iws_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Maps the exception in flight to a status code.
iws_status translate() {
    try {
        throw;
    } catch (const DomainError& e) {
        return fail(IWS_ERR_DOMAIN, e.what());
    } catch (const BracketError& e) {
        return fail(IWS_ERR_BRACKET, e.what());
    } catch (const ConvergenceError& e) {
        return fail(IWS_ERR_CONVERGENCE, e.what());
    } catch (const MomentError& e) {
        return fail(IWS_ERR_MOMENT, e.what());
    } catch (const CoefficientError& e) {
        return fail(IWS_ERR_COEFFICIENTS, e.what());
    } catch (const StatisticError& e) {
        return fail(IWS_ERR_STATISTIC, e.what());
    } catch (const FitError& e) {
        return fail(IWS_ERR_FIT, e.what());
    } catch (const StudyError& e) {
        return fail(IWS_ERR_STUDY, e.what());
    } catch (const Error& e) {
        return fail(IWS_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(IWS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(IWS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IWS_ERR_INTERNAL, "unknown error");
    }
}

template <class F>
iws_status guarded(F&& body) {
    try {
        body();
        return IWS_OK;
    } catch (...) {
        return translate();
    }
}

#define IWS_REQUIRE(ptr)                                                 \
    do {                                                                  \
        if (!(ptr)) return fail(IWS_ERR_NULL_ARG, #ptr " is NULL");       \
    } while (0)

ModelId to_model_id(iws_model_kind k) {
    switch (k) {
    case IWS_MODEL_IW: return ModelId::InverseWeibull;
    case IWS_MODEL_LL: return ModelId::LogLogistic;
    case IWS_MODEL_POLY: return ModelId::PolyHazard;
    case IWS_MODEL_WEIBULL: return ModelId::Weibull;
    }
    throw DomainError("unknown model kind " + std::to_string(static_cast<int>(k)));
}

iws_model_kind to_kind(ModelId id) {
    switch (id) {
    case ModelId::InverseWeibull: return IWS_MODEL_IW;
    case ModelId::LogLogistic: return IWS_MODEL_LL;
    case ModelId::PolyHazard: return IWS_MODEL_POLY;
    case ModelId::Weibull: return IWS_MODEL_WEIBULL;
    }
    return IWS_MODEL_IW;
}

iws_fit_report to_c(const FitReport& r) {
    iws_fit_report out{};
    out.model = to_kind(r.model_id);
    const auto p = parameters(r.model);
    out.n_params = std::min<std::size_t>(p.size(), 4);
    std::copy_n(p.begin(), out.n_params, out.params);
    out.mll = r.mll;
    out.ad_stat = r.ad_stat;
    out.has_p_value = r.ad_pvalue.has_value();
    out.p_value = r.ad_pvalue.value_or(0.0);
    out.has_rho_sq = r.rho_sq.has_value();
    out.rho_sq = r.rho_sq.value_or(0.0);
    return out;
}

iws_status new_sample(Sample s, iws_sample** out) {
    *out = new iws_sample{std::move(s)};
    return IWS_OK;
}

} // namespace

// Definitions take C linkage from the declarations in iwsurv.h.

const char* iws_version(void) { return "1.0.0"; }

const char* iws_last_error(void) { return g_last_error.c_str(); }

const char* iws_status_name(iws_status status) {
    switch (status) {
    case IWS_OK: return "ok";
    case IWS_ERR_DOMAIN: return "domain error";
    case IWS_ERR_BRACKET: return "bracket error";
    case IWS_ERR_CONVERGENCE: return "convergence error";
    case IWS_ERR_MOMENT: return "moment does not exist";
    case IWS_ERR_FIT: return "fit error";
    case IWS_ERR_STUDY: return "study error";
    case IWS_ERR_COEFFICIENTS: return "invalid coefficients";
    case IWS_ERR_STATISTIC: return "undefined statistic";
    case IWS_ERR_NULL_ARG: return "null argument";
    case IWS_ERR_IO: return "i/o error";
    case IWS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* iws_model_kind_name(iws_model_kind kind) {
    switch (kind) {
    case IWS_MODEL_IW: return "iw";
    case IWS_MODEL_LL: return "ll";
    case IWS_MODEL_POLY: return "poly";
    case IWS_MODEL_WEIBULL: return "weibull";
    }
    return "unknown";
}

iws_status iws_parse_model_kind(const char* name, iws_model_kind* out) {
    IWS_REQUIRE(name);
    IWS_REQUIRE(out);
    return guarded([&] { *out = to_kind(parse_model_id(name)); });
}

iws_status iws_rng_create(uint64_t seed, iws_rng** out) {
    IWS_REQUIRE(out);
    return guarded([&] { *out = new iws_rng{RandomStream(seed)}; });
}

void iws_rng_free(iws_rng* rng) { delete rng; }

iws_status iws_sample_create(const double* values, size_t n, iws_sample** out) {
    IWS_REQUIRE(out);
    if (n > 0) IWS_REQUIRE(values);
    return guarded([&] { new_sample(Sample(std::vector<double>(values, values + n)), out); });
}

iws_status iws_sample_fixture(char id, iws_sample** out) {
    IWS_REQUIRE(out);
    return guarded([&] { new_sample(fixture(parse_fixture_id(std::string(1, id))), out); });
}

iws_status iws_sample_read_file(const char* path, iws_sample** out) {
    IWS_REQUIRE(path);
    IWS_REQUIRE(out);
    return guarded([&] { new_sample(read_sample_file(path), out); });
}

iws_status iws_sample_write_file(const iws_sample* s, const char* path) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(path);
    return guarded([&] { write_sample_file(s->value, path); });
}

void iws_sample_free(iws_sample* s) { delete s; }

size_t iws_sample_size(const iws_sample* s) { return s ? s->value.size() : 0; }

iws_status iws_sample_values(const iws_sample* s, double* out, size_t capacity) {
    IWS_REQUIRE(s);
    if (capacity > 0) IWS_REQUIRE(out);
    const auto v = s->value.values();
    std::copy_n(v.begin(), std::min(capacity, v.size()), out);
    return IWS_OK;
}

iws_status iws_sample_gamma23(const iws_sample* s, double* cv, double* skewness) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(cv);
    IWS_REQUIRE(skewness);
    return guarded([&] {
        const Gamma23 g = sample_gamma23(s->value);
        *cv = g.cv;
        *skewness = g.skewness;
    });
}

iws_status iws_model_create(iws_model_kind kind, const double* params, size_t n_params, iws_model** out) {
    IWS_REQUIRE(params);
    IWS_REQUIRE(out);
    return guarded([&] {
        auto need = [&](size_t k) {
            if (n_params != k) {
                throw DomainError(std::string(iws_model_kind_name(kind)) + " takes " + std::to_string(k) +
                                  " parameters, got " + std::to_string(n_params));
            }
        };
        const double* p = params;
        switch (to_model_id(kind)) {
        case ModelId::InverseWeibull: need(2); *out = new iws_model{InverseWeibull({p[0], p[1]})}; break;
        case ModelId::LogLogistic: need(2); *out = new iws_model{LogLogistic({p[0], p[1]})}; break;
        case ModelId::PolyHazard: need(4); *out = new iws_model{PolyHazard({p[0], p[1], p[2], p[3]})}; break;
        case ModelId::Weibull: need(2); *out = new iws_model{Weibull({p[0], p[1]})}; break;
        }
    });
}

iws_status iws_model_clone(const iws_model* m, iws_model** out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(out);
    return guarded([&] { *out = new iws_model{m->value}; });
}

void iws_model_free(iws_model* m) { delete m; }

iws_model_kind iws_model_get_kind(const iws_model* m) { return to_kind(model_id(m->value)); }

size_t iws_model_params(const iws_model* m, double* out, size_t capacity) {
    if (!m) return 0;
    const auto p = parameters(m->value);
    if (out) std::copy_n(p.begin(), std::min(capacity, p.size()), out);
    return p.size();
}

iws_status iws_model_eval(const iws_model* m, iws_function fn, double x, double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(out);
    return guarded([&] {
        const Model& model = m->value;
        switch (fn) {
        case IWS_PDF: *out = pdf(model, x); return;
        case IWS_CDF: *out = cdf(model, x); return;
        case IWS_SF: *out = sf(model, x); return;
        case IWS_HAZARD: *out = hazard(model, x); return;
        case IWS_CUM_HAZARD: *out = cum_hazard(model, x); return;
        case IWS_QUANTILE: *out = quantile(model, x); return;
        case IWS_MRL: *out = mrl(model, x); return;
        }
        throw DomainError("unknown function selector");
    });
}

iws_status iws_model_sample(const iws_model* m, size_t n, iws_rng* rng, double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(rng);
    if (n > 0) IWS_REQUIRE(out);
    return guarded([&] {
        const auto v = sample(m->value, n, rng->value);
        std::copy(v.begin(), v.end(), out);
    });
}

iws_status iws_model_mrl_at_sf(const iws_model* m, double surviving_fraction, const iws_model* reference,
                               double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(out);
    return guarded([&] {
        *out = reference ? mrl_at_sf(m->value, surviving_fraction, reference->value)
                         : mrl_at_sf(m->value, surviving_fraction);
    });
}

iws_status iws_iw_shape_summary(double a, double b, iws_shape_summary* out) {
    IWS_REQUIRE(out);
    return guarded([&] {
        const ShapeSummary s = InverseWeibull({a, b}).shape_summary();
        *out = {s.mode, s.hazard_upper, s.hazard_peak, s.mrl_changepoint.has_value(),
                s.mrl_changepoint.value_or(0.0)};
    });
}

namespace {

template <class F>
iws_status gamma23_out(F&& f, double* cv, double* skewness) {
    IWS_REQUIRE(cv);
    IWS_REQUIRE(skewness);
    return guarded([&] {
        const Gamma23 g = f();
        *cv = g.cv;
        *skewness = g.skewness;
    });
}

} // namespace

iws_status iws_iw_gamma23(double b, double* cv, double* skewness) {
    return gamma23_out([&] { return iw_gamma23(b); }, cv, skewness);
}

iws_status iws_ll_gamma23(double gamma, double* cv, double* skewness) {
    return gamma23_out([&] { return ll_gamma23(gamma); }, cv, skewness);
}

iws_status iws_lognormal_gamma23(double shape, double* cv, double* skewness) {
    return gamma23_out([&] { return lognormal_gamma23(shape); }, cv, skewness);
}

iws_status iws_fit(iws_model_kind kind, const iws_sample* s, iws_model** out, int* boundary_active) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(out);
    return guarded([&] {
        const ModelId id = to_model_id(kind);
        if (id == ModelId::PolyHazard) {
            PolyHazardFit fit = fit_poly_ml(s->value);
            if (boundary_active) *boundary_active = fit.boundary_active;
            *out = new iws_model{std::move(fit.model)};
            return;
        }
        if (boundary_active) *boundary_active = 0;
        *out = new iws_model{fit_family(id, s->value)};
    });
}

iws_status iws_fit_poly_lsq(const iws_model* reference, int n_points, const double* range, iws_model** out,
                            double* design_rho_sq) {
    IWS_REQUIRE(reference);
    IWS_REQUIRE(out);
    return guarded([&] {
        std::optional<CdfRange> r;
        if (range) r = CdfRange{range[0], range[1]};
        PolyLsqFit fit = fit_poly_lsq_detail(reference->value, n_points, r);
        if (design_rho_sq) *design_rho_sq = fit.rho_sq;
        *out = new iws_model{std::move(fit.model)};
    });
}

iws_status iws_loglik(const iws_model* m, const iws_sample* s, double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(s);
    IWS_REQUIRE(out);
    return guarded([&] { *out = loglik(m->value, s->value); });
}

iws_status iws_rho_sq(const iws_model* m, const iws_sample* s, double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(s);
    IWS_REQUIRE(out);
    return guarded([&] { *out = rho_sq_hr(m->value, s->value); });
}

iws_status iws_ad_statistic(const iws_model* m, const iws_sample* s, double* out) {
    IWS_REQUIRE(m);
    IWS_REQUIRE(s);
    IWS_REQUIRE(out);
    return guarded([&] { *out = ad_statistic(s->value, m->value); });
}

iws_status iws_ad_known_pvalue(size_t n, double stat, double* out) {
    IWS_REQUIRE(out);
    return guarded([&] { *out = ad_known_pvalue(n, stat); });
}

namespace {

void fill(const ADResult& r, iws_ad_result* out) { *out = {r.stat, r.pvalue, r.reps, r.discarded}; }

} // namespace

iws_status iws_ad_pvalue_mc(const iws_sample* s, iws_model_kind family, int reps, iws_rng* rng,
                            unsigned threads, iws_ad_result* out) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] { fill(ad_pvalue_mc(s->value, to_model_id(family), reps, rng->value, {threads}), out); });
}

iws_status iws_ad_pvalue_mc_known(const iws_sample* s, const iws_model* m, int reps, iws_rng* rng,
                                  unsigned threads, iws_ad_result* out) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(m);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] { fill(ad_pvalue_mc_known(s->value, m->value, reps, rng->value, {threads}), out); });
}

iws_status iws_fit_report_create(iws_model_kind kind, const iws_sample* s, int reps, iws_rng* rng,
                                 unsigned threads, iws_fit_report* out) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] { *out = to_c(make_fit_report(to_model_id(kind), s->value, reps, rng->value, {threads})); });
}

iws_status iws_select(const iws_sample* s, int reps, iws_rng* rng, unsigned threads, iws_verdict* out) {
    IWS_REQUIRE(s);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] {
        const SelectionVerdict v = select_model(s->value, reps, rng->value, {threads});
        *out = {to_c(v.iw), to_c(v.ll), to_kind(v.winner_ad), to_kind(v.winner_mll), v.agree};
    });
}

void iws_study_config_default(iws_study_config* out) {
    static const double a[] = {1.0, 2.0, 3.0};
    static const double b[] = {1.1, 2.1, 3.1, 4.1, 5.1};
    static const int n[] = {10, 30, 50};
    if (!out) return;
    *out = {a, 3, b, 5, n, 3, 1000, 1, 0, 0};
}

iws_status iws_study_run(const iws_study_config* config, iws_study** out) {
    IWS_REQUIRE(config);
    IWS_REQUIRE(out);
    IWS_REQUIRE(config->a_list);
    IWS_REQUIRE(config->b_list);
    IWS_REQUIRE(config->n_list);
    return guarded([&] {
        SelectionStudyConfig c;
        c.a_list.assign(config->a_list, config->a_list + config->a_count);
        c.b_list.assign(config->b_list, config->b_list + config->b_count);
        c.n_list.assign(config->n_list, config->n_list + config->n_count);
        c.reps = config->reps;
        c.seed = config->seed;
        c.layout = config->independent_cells ? StreamLayout::IndependentCells : StreamLayout::CommonAcrossCells;
        c.threads = config->threads;
        *out = new iws_study{selection_study(c), std::nullopt};
    });
}

void iws_study_free(iws_study* st) { delete st; }

size_t iws_study_cell_count(const iws_study* st) { return st ? st->value.grid.size() : 0; }

iws_status iws_study_get_cell(const iws_study* st, size_t i, iws_study_cell* out) {
    IWS_REQUIRE(st);
    IWS_REQUIRE(out);
    if (i >= st->value.grid.size()) return fail(IWS_ERR_DOMAIN, "cell index out of range");
    const StudyCell& c = st->value.grid[i];
    *out = {c.a, c.b, c.n, c.p_ad, c.p_mll, c.p_both, c.p_either, c.reps, c.fit_failures};
    return IWS_OK;
}

size_t iws_study_average_count(const iws_study* st) { return st ? st->value.averages.size() : 0; }

iws_status iws_study_get_average(const iws_study* st, size_t i, iws_study_average* out) {
    IWS_REQUIRE(st);
    IWS_REQUIRE(out);
    if (i >= st->value.averages.size()) return fail(IWS_ERR_DOMAIN, "average index out of range");
    const StudyAverage& a = st->value.averages[i];
    *out = {a.n, a.p_ad, a.p_mll, a.p_both, a.p_either, a.cells};
    return IWS_OK;
}

iws_status iws_study_pivotality_count(iws_study* st, size_t* out) {
    IWS_REQUIRE(st);
    IWS_REQUIRE(out);
    return guarded([&] {
        if (!st->pivotality) st->pivotality = pivotality_check(st->value);
        *out = st->pivotality->size();
    });
}

iws_status iws_study_get_pivotality(iws_study* st, size_t i, iws_pivotality_row* out) {
    IWS_REQUIRE(st);
    IWS_REQUIRE(out);
    size_t count = 0;
    if (const iws_status rc = iws_study_pivotality_count(st, &count); rc != IWS_OK) return rc;
    if (i >= count) return fail(IWS_ERR_DOMAIN, "pivotality index out of range");
    const PivotalityRow& r = (*st->pivotality)[i];
    *out = {r.n, r.index.c_str(), r.spread, r.bound, r.pass};
    return IWS_OK;
}

namespace {

DeteriorationConfig to_cpp(const iws_deterioration& c) { return {c.k, c.h, c.v, c.d}; }
StressStrengthConfig to_cpp(const iws_stress_strength& c) { return {c.u, c.v, c.k, c.h}; }
DefensiveConfig to_cpp(const iws_defensive& c) { return {c.beta, c.k, c.h}; }

template <class F>
iws_status params_out(F&& f, double* a, double* b) {
    IWS_REQUIRE(a);
    IWS_REQUIRE(b);
    return guarded([&] {
        const IWParams p = f();
        *a = p.a;
        *b = p.b;
    });
}

} // namespace

iws_status iws_deterioration_iw(const iws_deterioration* c, double* a, double* b) {
    IWS_REQUIRE(c);
    return params_out([&] { return deterioration_iw(to_cpp(*c)); }, a, b);
}

iws_status iws_simulate_deterioration(const iws_deterioration* c, size_t n, iws_rng* rng, iws_sample** out) {
    IWS_REQUIRE(c);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] { new_sample(simulate_deterioration(to_cpp(*c), n, rng->value), out); });
}

iws_status iws_stress_strength_iw(const iws_stress_strength* c, double* a, double* b) {
    IWS_REQUIRE(c);
    return params_out([&] { return stress_strength_iw(to_cpp(*c)); }, a, b);
}

iws_status iws_simulate_stress_strength(const iws_stress_strength* c, size_t n, iws_rng* rng,
                                        iws_sample** out) {
    IWS_REQUIRE(c);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] { new_sample(simulate_stress_strength(to_cpp(*c), n, rng->value), out); });
}

iws_status iws_defensive_iw(const iws_defensive* c, double* a, double* b) {
    IWS_REQUIRE(c);
    return params_out([&] { return defensive_iw(to_cpp(*c)); }, a, b);
}

iws_status iws_defensive_cdf(const iws_defensive* c, double t, double* out) {
    IWS_REQUIRE(c);
    IWS_REQUIRE(out);
    return guarded([&] { *out = defensive_cdf(to_cpp(*c), t); });
}

iws_status iws_defensive_cdf_empirical(const iws_defensive* c, double t, size_t n, iws_rng* rng,
                                       unsigned threads, double* out) {
    IWS_REQUIRE(c);
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    if (n == 0) return fail(IWS_ERR_DOMAIN, "defensive_cdf_empirical: n must be positive");
    return guarded([&] { *out = defensive_cdf_empirical(to_cpp(*c), t, n, rng->value, threads); });
}

iws_status iws_defensive_series_check(const iws_defensive* c, double t, int terms, iws_series_check* out) {
    IWS_REQUIRE(c);
    IWS_REQUIRE(out);
    return guarded([&] {
        const SeriesCheck s = defensive_series_check(to_cpp(*c), t, terms);
        *out = {s.partial_sum, s.closed_form, s.gap, s.tail_bound};
    });
}

iws_status iws_max_stability_check(double a, double b, int n_max, size_t reps, iws_rng* rng,
                                   iws_max_stability* out) {
    IWS_REQUIRE(rng);
    IWS_REQUIRE(out);
    return guarded([&] {
        const MaxStabilityReport r = max_stability_check({a, b}, n_max, reps, rng->value);
        *out = {r.target.a, r.target.b, r.ad_stat, r.p_value, r.rejected, r.median_of_maxima, r.target_median};
    });
}

