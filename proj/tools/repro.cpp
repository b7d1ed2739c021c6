#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace cli {

using nlohmann::ordered_json;

namespace {

enum class Tol { Abs, Rel, SigFig2, Info };

struct Check {
    std::string section;
    std::string quantity;
    double value;
    double reference;
    Tol kind;
    double tol;
    std::string note;

    std::optional<bool> pass() const {
        switch (kind) {
        case Tol::Abs: return std::abs(value - reference) <= tol;
        case Tol::Rel: return std::abs(value - reference) <= tol * std::abs(reference);
        case Tol::SigFig2: {
            char a[32];
            char b[32];
            std::snprintf(a, sizeof a, "%.2g", value);
            std::snprintf(b, sizeof b, "%.2g", reference);
            return std::string(a) == b;
        }
        case Tol::Info: return std::nullopt;
        }
        return std::nullopt;
    }

    std::string tolerance() const {
        switch (kind) {
        case Tol::Abs: return "+-" + fmt(tol);
        case Tol::Rel: return "+-" + fmt(100.0 * tol) + "%";
        case Tol::SigFig2: return "2 sig. fig.";
        case Tol::Info: return "info";
        }
        return "";
    }
};

class Repro {
public:
    Repro(const Common& c, int reps) : c_(c), reps_(reps) {}

    void add(const std::string& quantity, double value, double reference, Tol kind, double tol,
             std::string note = {}) {
        checks_.push_back({section_, quantity, value, reference, kind, tol, std::move(note)});
    }

    void section(const std::string& name) { section_ = name; }

    RngPtr rng() const { return make_rng(c_.seed); }

    double ad(const iws_model* m, const iws_sample* s) const {
        double v = 0.0;
        check(iws_ad_statistic(m, s, &v));
        return v;
    }

    double loglik(const iws_model* m, const iws_sample* s) const {
        double v = 0.0;
        check(iws_loglik(m, s, &v));
        return v;
    }

    double rho_sq(const iws_model* m, const iws_sample* s) const {
        double v = 0.0;
        check(iws_rho_sq(m, s, &v));
        return v;
    }

    double pvalue_refit(const iws_sample* s, iws_model_kind family) const {
        iws_ad_result r{};
        check(iws_ad_pvalue_mc(s, family, reps_, rng().get(), c_.threads, &r));
        return r.pvalue;
    }

    double pvalue_known(const iws_sample* s, const iws_model* m, int reps) const {
        iws_ad_result r{};
        check(iws_ad_pvalue_mc_known(s, m, reps, rng().get(), c_.threads, &r));
        return r.pvalue;
    }

    double pvalue_asymptotic(const iws_sample* s, double stat) const {
        double p = 0.0;
        check(iws_ad_known_pvalue(iws_sample_size(s), stat, &p));
        return p;
    }

    double mrl_at(const iws_model* m, double r, const iws_model* reference) const {
        double v = 0.0;
        check(iws_model_mrl_at_sf(m, r, reference, &v));
        return v;
    }

    int reps() const { return reps_; }
    const Common& common() const { return c_; }
    const std::vector<Check>& checks() const { return checks_; }

private:
    const Common& c_;
    int reps_;
    std::string section_;
    std::vector<Check> checks_;
};

// The A and B fixtures are draws from these parents.
ModelPtr parent_a() { return make_model(IWS_MODEL_IW, {1.0, 1.1}); }
ModelPtr parent_b() { return make_model(IWS_MODEL_IW, {1.0, 4.1}); }

// Least-squares polynomial through 50 parent Cdf points equally spaced
// between the Cdf values at the smallest and largest observation of A.
ModelPtr a_priori_polynomial(const iws_sample* a, double* design_rho_sq) {
    const ModelPtr parent = parent_a();
    const auto v = values(a);
    const double range[2] = {eval(parent.get(), IWS_CDF, v.front()), eval(parent.get(), IWS_CDF, v.back())};
    iws_model* m = nullptr;
    check(iws_fit_poly_lsq(parent.get(), 50, range, &m, design_rho_sq));
    return ModelPtr(m);
}

void section_s4(Repro& r) {
    r.section("s4");
    const SamplePtr a = fixture('A');
    const ModelPtr parent = parent_a();
    const double ad_parent = r.ad(parent.get(), a.get());
    r.add("ad_stat, A vs parent IW(1, 1.1)", ad_parent, 0.2927, Tol::Abs, 0.005);
    r.add("p_value, A vs parent, Monte Carlo known params", r.pvalue_known(a.get(), parent.get(), 2 * r.reps()),
          0.94333, Tol::Abs, 0.04);
    r.add("p_value, A vs parent, asymptotic", r.pvalue_asymptotic(a.get(), ad_parent), 0.94333, Tol::Info, 0.0);

    const ModelPtr iw = fit(IWS_MODEL_IW, a.get());
    const auto p = params(iw.get());
    r.add("iw a", p[0], 1.027, Tol::Abs, 0.005);
    r.add("iw b", p[1], 1.105, Tol::Abs, 0.005);
    r.add("iw rho_sq", r.rho_sq(iw.get(), a.get()), 0.9648, Tol::Abs, 0.02);
    const double ad_iw = r.ad(iw.get(), a.get());
    r.add("iw ad_stat", ad_iw, 0.2740, Tol::Abs, 0.005);
    r.add("iw p_value, bootstrap with refitting", r.pvalue_refit(a.get(), IWS_MODEL_IW), 0.9530, Tol::Abs, 0.04);
    r.add("iw p_value, fitted params held fixed", r.pvalue_known(a.get(), iw.get(), r.reps()), 0.9530, Tol::Info,
          0.0, "no refitting in the replicates");

    double design_rho = 0.0;
    const ModelPtr lsq = a_priori_polynomial(a.get(), &design_rho);
    const auto c = params(lsq.get());
    r.add("lsq polynomial c1", c[0], 0.5305, Tol::SigFig2, 0.0);
    r.add("lsq polynomial c2", c[1], -0.03597, Tol::SigFig2, 0.0);
    r.add("lsq polynomial c3", c[2], 0.0008995, Tol::SigFig2, 0.0);
    r.add("lsq polynomial rho_sq on its design points", design_rho, 0.9908, Tol::Abs, 0.005);
    const double ad_lsq = r.ad(lsq.get(), a.get());
    r.add("lsq polynomial ad_stat", ad_lsq, 1.152, Tol::Abs, 0.005);
    r.add("lsq polynomial p_value, Monte Carlo known params", r.pvalue_known(a.get(), lsq.get(), r.reps()), 0.2856,
          Tol::Abs, 0.04);

    int boundary = 0;
    const ModelPtr ml = fit(IWS_MODEL_POLY, a.get(), &boundary);
    const auto d = params(ml.get());
    r.add("ml polynomial c1", d[0], 0.5427, Tol::Rel, 0.01);
    r.add("ml polynomial c2", d[1], -0.04931, Tol::Rel, 0.01);
    r.add("ml polynomial c3", d[2], 0.001728, Tol::Rel, 0.01);
    r.add("ml polynomial rho_sq", r.rho_sq(ml.get(), a.get()), 0.9758, Tol::Abs, 0.02);
}

void section_table1(Repro& r) {
    r.section("table1");
    const SamplePtr a = fixture('A');
    const ModelPtr parent = parent_a();
    const ModelPtr iw = fit(IWS_MODEL_IW, a.get());
    const ModelPtr lsq = a_priori_polynomial(a.get(), nullptr);
    const double rs[] = {0.50, 0.25, 0.10};
    const double true_ref[] = {18.85, 35.31, 81.15};
    const double iw_ref[] = {17.77, 33.47, 77.13};
    const double poly_ref[] = {4.268, 5.833, 8.958};
    for (int i = 0; i < 3; ++i) {
        const std::string tag = "R = " + fmt(rs[i]);
        r.add("true mrl, " + tag, r.mrl_at(parent.get(), rs[i], nullptr), true_ref[i], Tol::Rel, 0.005);
        r.add("iw mrl, " + tag, r.mrl_at(iw.get(), rs[i], parent.get()), iw_ref[i], Tol::Rel, 0.01);
        r.add("polynomial mrl, " + tag, r.mrl_at(lsq.get(), rs[i], parent.get()), poly_ref[i], Tol::Rel, 0.02);
    }
}

void section_s5(Repro& r) {
    r.section("s5");
    const SamplePtr b = fixture('B');
    const ModelPtr parent = parent_b();
    const double ad_parent = r.ad(parent.get(), b.get());
    r.add("ad_stat, B vs parent IW(1, 4.1)", ad_parent, 1.460, Tol::Abs, 0.005);
    r.add("p_value, B vs parent, Monte Carlo known params", r.pvalue_known(b.get(), parent.get(), r.reps()), 0.1864,
          Tol::Abs, 0.04);
    double g2 = 0.0;
    double g3 = 0.0;
    check(iws_sample_gamma23(b.get(), &g2, &g3));
    r.add("sample gamma2", g2, 0.4464, Tol::Abs, 1e-3);
    r.add("sample gamma3", g3, 4.894, Tol::Abs, 1e-3);
    check(iws_iw_gamma23(4.1, &g2, &g3));
    r.add("parent gamma2", g2, 0.4100, Tol::Abs, 1e-3);
    r.add("parent gamma3", g3, 5.236, Tol::Abs, 1e-3);

    const ModelPtr iw = fit(IWS_MODEL_IW, b.get());
    const ModelPtr ll = fit(IWS_MODEL_LL, b.get());
    const auto pi = params(iw.get());
    const auto pl = params(ll.get());
    r.add("iw a", pi[0], 0.9629, Tol::Abs, 0.005);
    r.add("iw b", pi[1], 4.752, Tol::Abs, 0.005);
    r.add("iw ad_stat", r.ad(iw.get(), b.get()), 0.5994, Tol::Abs, 0.005);
    r.add("iw p_value", r.pvalue_refit(b.get(), IWS_MODEL_IW), 0.1250, Tol::Abs, 0.04);
    r.add("iw mll", r.loglik(iw.get(), b.get()), -8.134, Tol::Abs, 0.05);
    r.add("ll sigma", pl[0], 1.145, Tol::Abs, 0.005);
    r.add("ll gamma", pl[1], 7.394, Tol::Abs, 0.005);
    r.add("ll ad_stat", r.ad(ll.get(), b.get()), 0.3587, Tol::Abs, 0.005);
    r.add("ll p_value", r.pvalue_refit(b.get(), IWS_MODEL_LL), 0.3875, Tol::Abs, 0.04);
    r.add("ll mll", r.loglik(ll.get(), b.get()), -9.403, Tol::Abs, 0.05);
    r.add("true mrl, R = 0.1", r.mrl_at(parent.get(), 0.1, nullptr), 0.5754, Tol::Rel, 0.005);
    r.add("iw mrl, R = 0.1", r.mrl_at(iw.get(), 0.1, parent.get()), 0.4729, Tol::Rel, 0.01);
    r.add("ll mrl, R = 0.1", r.mrl_at(ll.get(), 0.1, parent.get()), 0.2775, Tol::Rel, 0.01);

    iws_verdict v{};
    check(iws_select(b.get(), 0, r.rng().get(), r.common().threads, &v));
    r.add("winner_ad is ll", v.winner_ad == IWS_MODEL_LL, 1.0, Tol::Abs, 0.0);
    r.add("winner_mll is iw", v.winner_mll == IWS_MODEL_IW, 1.0, Tol::Abs, 0.0);
}

void section_s7(Repro& r) {
    r.section("s7");
    const SamplePtr c = fixture('C');
    const ModelPtr iw = fit(IWS_MODEL_IW, c.get());
    const ModelPtr ll = fit(IWS_MODEL_LL, c.get());
    const auto pi = params(iw.get());
    const auto pl = params(ll.get());
    double g2 = 0.0;
    double g3 = 0.0;
    check(iws_sample_gamma23(c.get(), &g2, &g3));
    r.add("sample gamma2", g2, 1.439, Tol::Abs, 1e-3);
    r.add("sample gamma3", g3, 2.428, Tol::Abs, 1e-3);
    r.add("iw a", pi[0], 0.688, Tol::Abs, 0.01);
    r.add("iw b", pi[1], 1.03, Tol::Abs, 0.01);
    r.add("iw ad_stat", r.ad(iw.get(), c.get()), 0.312, Tol::Abs, 0.005);
    r.add("iw p_value", r.pvalue_refit(c.get(), IWS_MODEL_IW), 0.596, Tol::Abs, 0.04);
    r.add("iw mll", r.loglik(iw.get(), c.get()), -36.1, Tol::Abs, 0.05);
    // The reference labels are swapped: 2.37 is the scale, 1.68 the shape.
    r.add("ll sigma", pl[0], 2.37, Tol::Abs, 0.01, "reference labels it gamma");
    r.add("ll gamma", pl[1], 1.68, Tol::Abs, 0.01, "reference labels it sigma");
    r.add("ll ad_stat", r.ad(ll.get(), c.get()), 0.201, Tol::Abs, 0.005);
    r.add("ll p_value", r.pvalue_refit(c.get(), IWS_MODEL_LL), 0.870, Tol::Abs, 0.04);
    r.add("ll mll", r.loglik(ll.get(), c.get()), -35.8, Tol::Abs, 0.05);

    iws_verdict v{};
    check(iws_select(c.get(), 0, r.rng().get(), r.common().threads, &v));
    r.add("winner_ad is ll", v.winner_ad == IWS_MODEL_LL, 1.0, Tol::Abs, 0.0);
    r.add("winner_mll is ll", v.winner_mll == IWS_MODEL_LL, 1.0, Tol::Abs, 0.0);
}

void section_table2(Repro& r) {
    r.section("table2");
    iws_study_config cfg{};
    iws_study_config_default(&cfg);
    cfg.reps = r.reps();
    cfg.seed = r.common().seed;
    cfg.threads = r.common().threads;
    iws_study* raw = nullptr;
    check(iws_study_run(&cfg, &raw));
    const StudyPtr st(raw);
    const double ref[3][3] = {{0.60, 0.78, 0.78}, {0.77, 0.88, 0.88}, {0.85, 0.93, 0.93}};
    for (std::size_t i = 0; i < iws_study_average_count(st.get()) && i < 3; ++i) {
        iws_study_average a{};
        check(iws_study_get_average(st.get(), i, &a));
        const std::string tag = "n = " + std::to_string(a.n);
        r.add("P-AD, " + tag, a.p_ad, ref[i][0], Tol::Abs, 0.03);
        r.add("P-MLL, " + tag, a.p_mll, ref[i][1], Tol::Abs, 0.03);
        r.add("P-AD&MLL (either criterion), " + tag, a.p_either, ref[i][2], Tol::Abs, 0.03);
        r.add("both criteria, " + tag, a.p_both, ref[i][2], Tol::Info, 0.0, "intersection of the two events");
    }
    size_t rows = 0;
    check(iws_study_pivotality_count(st.get(), &rows));
    for (size_t i = 0; i < rows; ++i) {
        iws_pivotality_row p{};
        check(iws_study_get_pivotality(st.get(), i, &p));
        r.add(std::string("spread of ") + p.index + ", n = " + std::to_string(p.n), p.spread, 0.0, Tol::Abs, p.bound,
              "3 binomial SE");
    }
}

} // namespace

Report cmd_repro(const Common& c, const ReproOptions& o) {
    if (o.reps < 100) throw Failure(2, "--reps must be at least 100");
    Repro r(c, o.reps);
    const std::string& s = o.section;
    const bool all = s == "all";
    if (all || s == "s4") section_s4(r);
    if (all || s == "table1") section_table1(r);
    if (all || s == "s5") section_s5(r);
    if (all || s == "s7") section_s7(r);
    if (all || s == "table2") section_table2(r);
    if (r.checks().empty()) throw Failure(2, "unknown section '" + s + "'");

    Report out;
    out.doc["command"] = "repro";
    out.doc["section"] = s;
    out.doc["seed"] = c.seed;
    out.doc["reps"] = o.reps;
    ordered_json checks = ordered_json::array();
    std::ostringstream os;
    os << "repro " << s << " (seed " << c.seed << ", reps " << o.reps << ")\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-7s %-50s %12s %12s %12s  %s\n", "section", "quantity", "value", "reference",
                  "tolerance", "result");
    os << line;
    int passed = 0;
    int total = 0;
    for (const Check& ch : r.checks()) {
        const auto ok = ch.pass();
        ordered_json j{{"section", ch.section},
                       {"quantity", ch.quantity},
                       {"value", num(ch.value)},
                       {"reference", num(ch.reference)},
                       {"tolerance", ch.tolerance()},
                       {"pass", ok ? ordered_json(*ok) : ordered_json(nullptr)}};
        if (!ch.note.empty()) j["note"] = ch.note;
        checks.push_back(j);
        if (ok) {
            ++total;
            passed += *ok;
        }
        std::snprintf(line, sizeof line, "%-7s %-50s %12s %12s %12s  %s%s\n", ch.section.c_str(),
                      ch.quantity.c_str(), fmt(ch.value).c_str(), fmt(ch.reference).c_str(),
                      ch.tolerance().c_str(), ok ? (*ok ? "pass" : "FAIL") : "-",
                      ch.note.empty() ? "" : ("  (" + ch.note + ")").c_str());
        os << line;
    }
    out.doc["checks"] = checks;
    out.doc["passed"] = passed;
    out.doc["total"] = total;
    os << '\n' << passed << " of " << total << " checks within tolerance\n";
    out.text = os.str();
    return out;
}

} // namespace cli
