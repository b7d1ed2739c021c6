#include "iwsurv/iwsurv.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

struct SampleGuard {
    iws_sample* p = nullptr;
    ~SampleGuard() { iws_sample_free(p); }
};
struct ModelGuard {
    iws_model* p = nullptr;
    ~ModelGuard() { iws_model_free(p); }
};
struct RngGuard {
    iws_rng* p = nullptr;
    ~RngGuard() { iws_rng_free(p); }
};
struct StudyGuard {
    iws_study* p = nullptr;
    ~StudyGuard() { iws_study_free(p); }
};

} // namespace

TEST_CASE("version and names") {
    CHECK(std::strlen(iws_version()) > 0);
    CHECK(std::string(iws_status_name(IWS_OK)) != std::string(iws_status_name(IWS_ERR_DOMAIN)));
    CHECK(std::string(iws_model_kind_name(IWS_MODEL_IW)) == "iw");
    CHECK(std::string(iws_model_kind_name(IWS_MODEL_LL)) == "ll");
    CHECK(std::string(iws_model_kind_name(IWS_MODEL_POLY)) == "poly");
    CHECK(std::string(iws_model_kind_name(IWS_MODEL_WEIBULL)) == "weibull");
    iws_model_kind k;
    CHECK(iws_parse_model_kind("ll", &k) == IWS_OK);
    CHECK(k == IWS_MODEL_LL);
    CHECK(iws_parse_model_kind("gamma", &k) == IWS_ERR_DOMAIN);
    CHECK(std::string(iws_last_error()).find("gamma") != std::string::npos);
    CHECK(iws_parse_model_kind(nullptr, &k) == IWS_ERR_NULL_ARG);
}

TEST_CASE("free functions accept NULL") {
    iws_sample_free(nullptr);
    iws_model_free(nullptr);
    iws_rng_free(nullptr);
    iws_study_free(nullptr);
}

TEST_CASE("samples") {
    SampleGuard a;
    REQUIRE(iws_sample_fixture('A', &a.p) == IWS_OK);
    CHECK(iws_sample_size(a.p) == 50);
    SampleGuard c;
    REQUIRE(iws_sample_fixture('c', &c.p) == IWS_OK);
    CHECK(iws_sample_size(c.p) == 15);
    iws_sample* none = nullptr;
    CHECK(iws_sample_fixture('D', &none) == IWS_ERR_DOMAIN);
    CHECK(none == nullptr);

    const double raw[] = {3.0, 1.0, 2.0};
    SampleGuard s;
    REQUIRE(iws_sample_create(raw, 3, &s.p) == IWS_OK);
    double v[3];
    REQUIRE(iws_sample_values(s.p, v, 3) == IWS_OK);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 2.0);
    CHECK(v[2] == 3.0);
    double cv, sk;
    REQUIRE(iws_sample_gamma23(s.p, &cv, &sk) == IWS_OK);
    CHECK(std::abs(cv - 0.5) < 1e-15);
    CHECK(std::abs(sk) < 1e-15);

    const double bad[] = {1.0, -1.0};
    iws_sample* b = nullptr;
    CHECK(iws_sample_create(bad, 2, &b) == IWS_ERR_DOMAIN);
    CHECK(b == nullptr);
    CHECK(iws_sample_create(nullptr, 2, &b) == IWS_ERR_NULL_ARG);

    const std::string path = std::string(P_tmpdir) + "/iws_capi_sample.txt";
    REQUIRE(iws_sample_write_file(a.p, path.c_str()) == IWS_OK);
    SampleGuard back;
    REQUIRE(iws_sample_read_file(path.c_str(), &back.p) == IWS_OK);
    std::vector<double> x(50), y(50);
    iws_sample_values(a.p, x.data(), 50);
    iws_sample_values(back.p, y.data(), 50);
    CHECK(x == y);
    std::remove(path.c_str());
    CHECK(iws_sample_read_file(path.c_str(), &b) == IWS_ERR_IO);
}

TEST_CASE("models") {
    const double p[] = {1.0, 1.0};
    ModelGuard m;
    REQUIRE(iws_model_create(IWS_MODEL_IW, p, 2, &m.p) == IWS_OK);
    CHECK(iws_model_get_kind(m.p) == IWS_MODEL_IW);
    double out;
    REQUIRE(iws_model_eval(m.p, IWS_PDF, 1.0, &out) == IWS_OK);
    CHECK(std::abs(out - std::exp(-1.0)) < 1e-15);
    REQUIRE(iws_model_eval(m.p, IWS_HAZARD, 1.0, &out) == IWS_OK);
    CHECK(std::abs(out - 1.0 / (std::exp(1.0) - 1.0)) < 1e-15);
    REQUIRE(iws_model_eval(m.p, IWS_QUANTILE, std::exp(-1.0), &out) == IWS_OK);
    CHECK(std::abs(out - 1.0) < 1e-14);
    REQUIRE(iws_model_eval(m.p, IWS_CUM_HAZARD, 1.0, &out) == IWS_OK);
    CHECK(std::abs(out + std::log(1.0 - std::exp(-1.0))) < 1e-14);
    CHECK(iws_model_eval(m.p, IWS_MRL, 1.0, &out) == IWS_ERR_MOMENT);
    CHECK(iws_model_eval(m.p, IWS_QUANTILE, 1.5, &out) == IWS_ERR_DOMAIN);
    CHECK(iws_model_eval(m.p, static_cast<iws_function>(99), 1.0, &out) == IWS_ERR_DOMAIN);

    ModelGuard copy;
    REQUIRE(iws_model_clone(m.p, &copy.p) == IWS_OK);
    double q[4] = {};
    CHECK(iws_model_params(copy.p, q, 4) == 2);
    CHECK(q[0] == 1.0);
    CHECK(q[1] == 1.0);

    iws_model* bad = nullptr;
    CHECK(iws_model_create(IWS_MODEL_IW, p, 3, &bad) == IWS_ERR_DOMAIN);
    const double neg[] = {-1.0, 1.0};
    CHECK(iws_model_create(IWS_MODEL_LL, neg, 2, &bad) == IWS_ERR_DOMAIN);
    const double poly[] = {1.0, -1.0, 0.0, 10.0};
    CHECK(iws_model_create(IWS_MODEL_POLY, poly, 4, &bad) == IWS_ERR_COEFFICIENTS);
    CHECK(bad == nullptr);

    RngGuard r1, r2;
    REQUIRE(iws_rng_create(12, &r1.p) == IWS_OK);
    REQUIRE(iws_rng_create(12, &r2.p) == IWS_OK);
    double x[20], y[20];
    REQUIRE(iws_model_sample(m.p, 20, r1.p, x) == IWS_OK);
    REQUIRE(iws_model_sample(m.p, 20, r2.p, y) == IWS_OK);
    CHECK(std::memcmp(x, y, sizeof x) == 0);

    const double parent[] = {1.0, 1.1};
    ModelGuard iw;
    REQUIRE(iws_model_create(IWS_MODEL_IW, parent, 2, &iw.p) == IWS_OK);
    REQUIRE(iws_model_mrl_at_sf(iw.p, 0.5, nullptr, &out) == IWS_OK);
    CHECK(std::abs(out / 18.85 - 1.0) < 0.005);
}

TEST_CASE("shape and moments") {
    iws_shape_summary s;
    REQUIRE(iws_iw_shape_summary(1.0, 1.0, &s) == IWS_OK);
    CHECK(std::abs(s.mode - 0.5) < 1e-15);
    CHECK(std::abs(s.hazard_upper - 1.0) < 1e-15);
    CHECK(s.has_mrl_changepoint == 0);
    REQUIRE(iws_iw_shape_summary(1.0, 3.0, &s) == IWS_OK);
    CHECK(s.has_mrl_changepoint == 1);
    CHECK(s.mrl_changepoint > 0.0);

    double cv, sk;
    REQUIRE(iws_iw_gamma23(4.1, &cv, &sk) == IWS_OK);
    CHECK(std::abs(cv - 0.41) < 5e-5);
    CHECK(std::abs(sk - 5.236) < 5e-4);
    CHECK(iws_iw_gamma23(3.0, &cv, &sk) == IWS_ERR_MOMENT);
    CHECK(iws_ll_gamma23(3.0, &cv, &sk) == IWS_ERR_MOMENT);
    REQUIRE(iws_lognormal_gamma23(1.0, &cv, &sk) == IWS_OK);
    CHECK(std::abs(cv - std::sqrt(std::exp(1.0) - 1.0)) < 1e-13);
}

TEST_CASE("fitting") {
    SampleGuard a, b;
    REQUIRE(iws_sample_fixture('A', &a.p) == IWS_OK);
    REQUIRE(iws_sample_fixture('B', &b.p) == IWS_OK);
    ModelGuard iw;
    REQUIRE(iws_fit(IWS_MODEL_IW, a.p, &iw.p, nullptr) == IWS_OK);
    double p[2];
    REQUIRE(iws_model_params(iw.p, p, 2) == 2);
    CHECK(std::abs(p[0] - 1.027) < 0.005);
    CHECK(std::abs(p[1] - 1.105) < 0.005);

    ModelGuard poly;
    int boundary = -1;
    REQUIRE(iws_fit(IWS_MODEL_POLY, a.p, &poly.p, &boundary) == IWS_OK);
    CHECK((boundary == 0 || boundary == 1));
    double rho;
    REQUIRE(iws_rho_sq(poly.p, a.p, &rho) == IWS_OK);
    CHECK(std::abs(rho - 0.9758) < 0.02);

    ModelGuard ll;
    REQUIRE(iws_fit(IWS_MODEL_LL, b.p, &ll.p, nullptr) == IWS_OK);
    double mll;
    REQUIRE(iws_loglik(ll.p, b.p, &mll) == IWS_OK);
    CHECK(std::abs(mll - -9.403) < 0.01);

    const double ref[] = {1.0, 1.1};
    ModelGuard parent, lsq;
    REQUIRE(iws_model_create(IWS_MODEL_IW, ref, 2, &parent.p) == IWS_OK);
    double av[50];
    iws_sample_values(a.p, av, 50);
    double cmin, cmax;
    iws_model_eval(parent.p, IWS_CDF, av[0], &cmin);
    iws_model_eval(parent.p, IWS_CDF, av[49], &cmax);
    const double range[] = {cmin, cmax};
    double design;
    REQUIRE(iws_fit_poly_lsq(parent.p, 50, range, &lsq.p, &design) == IWS_OK);
    CHECK(std::abs(design - 0.9908) < 5e-4);
    const double reversed[] = {0.5, 0.1};
    iws_model* none = nullptr;
    CHECK(iws_fit_poly_lsq(parent.p, 50, reversed, &none, nullptr) == IWS_ERR_DOMAIN);

    const double same[] = {2.0, 2.0, 2.0};
    SampleGuard flat;
    REQUIRE(iws_sample_create(same, 3, &flat.p) == IWS_OK);
    CHECK(iws_fit(IWS_MODEL_IW, flat.p, &none, nullptr) == IWS_ERR_FIT);
    CHECK(std::strlen(iws_last_error()) > 0);
    CHECK(iws_fit(IWS_MODEL_IW, nullptr, &none, nullptr) == IWS_ERR_NULL_ARG);
}

TEST_CASE("goodness of fit and selection") {
    SampleGuard a, c;
    REQUIRE(iws_sample_fixture('A', &a.p) == IWS_OK);
    REQUIRE(iws_sample_fixture('C', &c.p) == IWS_OK);
    const double ref[] = {1.0, 1.1};
    ModelGuard parent;
    REQUIRE(iws_model_create(IWS_MODEL_IW, ref, 2, &parent.p) == IWS_OK);
    double stat;
    REQUIRE(iws_ad_statistic(parent.p, a.p, &stat) == IWS_OK);
    CHECK(std::abs(stat - 0.2927) < 5e-4);
    double p;
    REQUIRE(iws_ad_known_pvalue(50, stat, &p) == IWS_OK);
    CHECK(std::abs(p - 0.94333) < 0.03);

    RngGuard rng;
    REQUIRE(iws_rng_create(1, &rng.p) == IWS_OK);
    iws_ad_result r;
    REQUIRE(iws_ad_pvalue_mc(c.p, IWS_MODEL_LL, 1000, rng.p, 0, &r) == IWS_OK);
    CHECK(std::abs(r.pvalue - 0.870) < 0.04);
    CHECK(r.reps == 1000);
    CHECK(iws_ad_pvalue_mc(c.p, IWS_MODEL_LL, 10, rng.p, 0, &r) == IWS_ERR_DOMAIN);
    REQUIRE(iws_ad_pvalue_mc_known(a.p, parent.p, 500, rng.p, 1, &r) == IWS_OK);
    CHECK(r.pvalue > 0.5);

    iws_verdict v;
    REQUIRE(iws_select(c.p, 0, rng.p, 1, &v) == IWS_OK);
    CHECK(v.winner_ad == IWS_MODEL_LL);
    CHECK(v.winner_mll == IWS_MODEL_LL);
    CHECK(v.agree == 1);
    CHECK(v.iw.has_p_value == 0);
    CHECK(v.iw.n_params == 2);
    CHECK(v.iw.model == IWS_MODEL_IW);
    CHECK(std::abs(v.iw.mll - -36.1) < 0.05);

    iws_fit_report fr;
    REQUIRE(iws_fit_report_create(IWS_MODEL_IW, c.p, 100, rng.p, 1, &fr) == IWS_OK);
    CHECK(fr.has_p_value == 1);
    CHECK(fr.p_value > 0.0);
}

TEST_CASE("selection study") {
    iws_study_config cfg;
    iws_study_config_default(&cfg);
    CHECK(cfg.a_count == 3);
    CHECK(cfg.b_count == 5);
    CHECK(cfg.n_count == 3);
    CHECK(cfg.reps == 1000);
    const double a[] = {1.0, 2.0};
    const double b[] = {2.1};
    const int n[] = {10};
    cfg.a_list = a;
    cfg.a_count = 2;
    cfg.b_list = b;
    cfg.b_count = 1;
    cfg.n_list = n;
    cfg.n_count = 1;
    cfg.reps = 50;
    StudyGuard st;
    REQUIRE(iws_study_run(&cfg, &st.p) == IWS_OK);
    REQUIRE(iws_study_cell_count(st.p) == 2);
    iws_study_cell cell;
    REQUIRE(iws_study_get_cell(st.p, 0, &cell) == IWS_OK);
    CHECK(cell.reps == 50);
    CHECK(cell.p_both <= cell.p_ad);
    CHECK(cell.p_both <= cell.p_mll);
    CHECK(iws_study_get_cell(st.p, 5, &cell) == IWS_ERR_DOMAIN);
    REQUIRE(iws_study_average_count(st.p) == 1);
    iws_study_average avg;
    REQUIRE(iws_study_get_average(st.p, 0, &avg) == IWS_OK);
    CHECK(avg.n == 10);
    CHECK(avg.cells == 2);
    size_t rows = 0;
    REQUIRE(iws_study_pivotality_count(st.p, &rows) == IWS_OK);
    CHECK(rows == 2);
    iws_pivotality_row row;
    REQUIRE(iws_study_get_pivotality(st.p, 0, &row) == IWS_OK);
    CHECK(row.pass == 1);
    CHECK(std::string(row.index).rfind("P-", 0) == 0);

    cfg.reps = 0;
    iws_study* none = nullptr;
    CHECK(iws_study_run(&cfg, &none) == IWS_ERR_DOMAIN);
}

TEST_CASE("mechanisms") {
    double a, b;
    const iws_deterioration det{2.0, 2.0, 1.5, 8.0};
    REQUIRE(iws_deterioration_iw(&det, &a, &b) == IWS_OK);
    CHECK(std::abs(a - 0.5) < 1e-15);
    CHECK(std::abs(b - 3.0) < 1e-15);
    const iws_stress_strength ss{1.0, 1.0, 1.0, 1.0};
    REQUIRE(iws_stress_strength_iw(&ss, &a, &b) == IWS_OK);
    CHECK(a == 1.0);
    const iws_defensive def{1.0, 1.0, 2.0};
    REQUIRE(iws_defensive_iw(&def, &a, &b) == IWS_OK);
    CHECK(b == 1.0);
    double f;
    REQUIRE(iws_defensive_cdf(&def, 2.0, &f) == IWS_OK);
    CHECK(std::abs(f - std::exp(-0.5)) < 1e-15);
    CHECK(iws_defensive_cdf(&def, 0.5, &f) == IWS_ERR_DOMAIN);

    RngGuard rng;
    REQUIRE(iws_rng_create(1, &rng.p) == IWS_OK);
    SampleGuard s;
    REQUIRE(iws_simulate_deterioration(&det, 1000, rng.p, &s.p) == IWS_OK);
    CHECK(iws_sample_size(s.p) == 1000);
    SampleGuard s2;
    REQUIRE(iws_simulate_stress_strength(&ss, 500, rng.p, &s2.p) == IWS_OK);
    CHECK(iws_sample_size(s2.p) == 500);
    REQUIRE(iws_defensive_cdf_empirical(&def, 2.0, 100000, rng.p, 1, &f) == IWS_OK);
    CHECK(std::abs(f - std::exp(-0.5)) < 0.01);

    iws_series_check sc;
    REQUIRE(iws_defensive_series_check(&def, 2.0, 40, &sc) == IWS_OK);
    CHECK(sc.gap < 1e-12);

    iws_max_stability ms;
    REQUIRE(iws_max_stability_check(1.0, 2.0, 10, 20000, rng.p, &ms) == IWS_OK);
    CHECK(std::abs(ms.target_a - std::pow(10.0, -0.5)) < 1e-15);
    CHECK(ms.rejected == 0);

    const iws_deterioration bad{-1.0, 1.0, 1.0, 1.0};
    CHECK(iws_deterioration_iw(&bad, &a, &b) == IWS_ERR_DOMAIN);
    CHECK(iws_deterioration_iw(nullptr, &a, &b) == IWS_ERR_NULL_ARG);
}

TEST_CASE("last error is kept per failing call") {
    iws_model_kind k;
    CHECK(iws_parse_model_kind("nope", &k) == IWS_ERR_DOMAIN);
    const std::string first = iws_last_error();
    CHECK(iws_parse_model_kind("iw", &k) == IWS_OK);
    CHECK(std::string(iws_last_error()) == first);
}
