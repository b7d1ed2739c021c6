#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cli {

using nlohmann::ordered_json;

LoadedSample load_sample(const InputSpec& in, std::size_t min_size) {
    if (in.fixture.empty() == in.path.empty()) {
        throw Failure(2, "give exactly one of --fixture or --input");
    }
    LoadedSample out;
    iws_sample* s = nullptr;
    if (!in.fixture.empty()) {
        if (in.fixture.size() != 1) throw Failure(2, "unknown fixture '" + in.fixture + "' (expected A, B or C)");
        check(iws_sample_fixture(in.fixture[0], &s));
        out.label = "fixture " + std::string(1, static_cast<char>(std::toupper(in.fixture[0])));
    } else {
        check(iws_sample_read_file(in.path.c_str(), &s));
        out.label = in.path;
    }
    out.sample.reset(s);
    const std::size_t n = iws_sample_size(s);
    if (n < min_size) {
        throw Failure(2, "sample too small (n = " + std::to_string(n) + ", need at least " +
                             std::to_string(min_size) + ")");
    }
    return out;
}

void emit(const Common& c, const Report& r) {
    if (c.format == Format::Json) {
        std::cout << r.doc.dump(2) << '\n';
    } else {
        std::cout << r.text;
    }
}

ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return sig6(x);
}

ordered_json params_json(iws_model_kind kind, const double* p, std::size_t n) {
    ordered_json j = ordered_json::object();
    const auto names = param_names(kind);
    for (std::size_t i = 0; i < n && i < names.size(); ++i) j[names[i]] = num(p[i]);
    return j;
}

ordered_json fit_report_json(const iws_fit_report& r) {
    ordered_json j;
    j["model"] = iws_model_kind_name(r.model);
    j["params"] = params_json(r.model, r.params, r.n_params);
    j["mll"] = num(r.mll);
    j["ad_stat"] = num(r.ad_stat);
    j["p_value"] = r.has_p_value ? num(r.p_value) : ordered_json(nullptr);
    j["rho_sq"] = r.has_rho_sq ? num(r.rho_sq) : ordered_json(nullptr);
    return j;
}

namespace {

std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

void text_fit(std::ostringstream& os, const iws_fit_report& r, const char* indent = "  ") {
    const auto names = param_names(r.model);
    for (std::size_t i = 0; i < r.n_params; ++i) os << indent << pad(names[i], 9) << fmt(r.params[i]) << '\n';
    os << indent << pad("mll", 9) << fmt(r.mll) << '\n';
    os << indent << pad("ad_stat", 9) << fmt(r.ad_stat) << '\n';
    if (r.has_p_value) os << indent << pad("p_value", 9) << fmt(r.p_value) << '\n';
    if (r.has_rho_sq) os << indent << pad("rho_sq", 9) << fmt(r.rho_sq) << '\n';
}

iws_model_kind parse_kind(const std::string& name) {
    iws_model_kind k{};
    check(iws_parse_model_kind(name.c_str(), &k));
    return k;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Failure(2, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Failure(1, "error writing '" + path + "'");
}

// Known-parameter AD verdict at the 1% level.
struct AdVerdict {
    double stat;
    double pvalue;
    bool pass;
};

AdVerdict ad_against_iw(const iws_sample* s, double a, double b) {
    const ModelPtr m = make_model(IWS_MODEL_IW, {a, b});
    AdVerdict v{};
    check(iws_ad_statistic(m.get(), s, &v.stat));
    check(iws_ad_known_pvalue(iws_sample_size(s), v.stat, &v.pvalue));
    v.pass = v.pvalue >= 0.01;
    return v;
}

} // namespace

Report cmd_fit(const Common& c, const FitOptions& o) {
    const iws_model_kind kind = parse_kind(o.model);
    const LoadedSample in = load_sample(o.input, kind == IWS_MODEL_POLY ? 4 : 3);
    const RngPtr rng = make_rng(c.seed);
    iws_fit_report r{};
    check(iws_fit_report_create(kind, in.sample.get(), o.reps, rng.get(), c.threads, &r));

    Report out;
    out.doc["command"] = "fit";
    out.doc["input"] = in.label;
    out.doc["n"] = iws_sample_size(in.sample.get());
    out.doc["seed"] = c.seed;
    out.doc["reps"] = o.reps;
    const ordered_json fields = fit_report_json(r);
    for (const auto& [k, v] : fields.items()) out.doc[k] = v;

    std::ostringstream os;
    os << "fit " << iws_model_kind_name(kind) << " to " << in.label << " (n = " << iws_sample_size(in.sample.get())
       << ", seed " << c.seed << ", reps " << o.reps << ")\n";
    text_fit(os, r);
    out.text = os.str();
    return out;
}

Report cmd_select(const Common& c, const SelectOptions& o) {
    const LoadedSample in = load_sample(o.input);
    const RngPtr rng = make_rng(c.seed);
    iws_verdict v{};
    check(iws_select(in.sample.get(), o.reps, rng.get(), c.threads, &v));

    Report out;
    out.doc["command"] = "select";
    out.doc["input"] = in.label;
    out.doc["n"] = iws_sample_size(in.sample.get());
    out.doc["seed"] = c.seed;
    out.doc["reps"] = o.reps;
    out.doc["fits"] = ordered_json::array({fit_report_json(v.iw), fit_report_json(v.ll)});
    out.doc["winner_ad"] = iws_model_kind_name(v.winner_ad);
    out.doc["winner_mll"] = iws_model_kind_name(v.winner_mll);
    out.doc["agree"] = static_cast<bool>(v.agree);

    std::ostringstream os;
    os << "select on " << in.label << " (n = " << iws_sample_size(in.sample.get()) << ", seed " << c.seed
       << ", reps " << o.reps << ")\n";
    os << "iw\n";
    text_fit(os, v.iw);
    os << "ll\n";
    text_fit(os, v.ll);
    os << "winner_ad   " << iws_model_kind_name(v.winner_ad) << '\n';
    os << "winner_mll  " << iws_model_kind_name(v.winner_mll) << '\n';
    os << "agree       " << (v.agree ? "yes" : "no") << '\n';
    out.text = os.str();
    return out;
}

Report cmd_study(const Common& c, const StudyOptions& o) {
    if (o.reps < 100) {
        std::cerr << "warning: reps = " << o.reps << " is below 100; the estimates are very noisy\n";
    }
    iws_study_config cfg{o.a_list.data(), o.a_list.size(), o.b_list.data(), o.b_list.size(), o.n_list.data(),
                         o.n_list.size(), o.reps, c.seed, o.independent_cells ? 1 : 0, c.threads};
    iws_study* raw = nullptr;
    check(iws_study_run(&cfg, &raw));
    const StudyPtr st(raw);

    Report out;
    std::ostringstream os;
    std::ostringstream csv;
    out.doc["command"] = "study";
    out.doc["seed"] = c.seed;
    out.doc["reps"] = o.reps;
    out.doc["layout"] = o.independent_cells ? "independent" : "common";
    os << "selection study (seed " << c.seed << ", reps " << o.reps << " per cell, "
       << (o.independent_cells ? "independent" : "common") << " streams)\n";
    if (o.reps < 1000) {
        const double se = 0.5 / std::sqrt(static_cast<double>(o.reps));
        os << "note: with " << o.reps << " reps per cell the binomial standard error is up to " << fmt(se)
           << "; expect wide confidence intervals\n";
        out.doc["note"] = "binomial standard error up to " + fmt(se);
    }

    csv << "row,a,b,n,p_ad,p_mll,p_both,p_either,reps,fit_failures\n";
    os << "\n       a       b    n    P-AD   P-MLL  P-both P-either  failures\n";
    ordered_json grid = ordered_json::array();
    for (std::size_t i = 0; i < iws_study_cell_count(st.get()); ++i) {
        iws_study_cell cell{};
        check(iws_study_get_cell(st.get(), i, &cell));
        grid.push_back({{"a", num(cell.a)},
                        {"b", num(cell.b)},
                        {"n", cell.n},
                        {"p_ad", num(cell.p_ad)},
                        {"p_mll", num(cell.p_mll)},
                        {"p_both", num(cell.p_both)},
                        {"p_either", num(cell.p_either)},
                        {"fit_failures", cell.fit_failures}});
        char line[160];
        std::snprintf(line, sizeof line, "%8.6g %7.6g %4d %7.4f %7.4f %7.4f %8.4f %9d\n", cell.a, cell.b, cell.n,
                      cell.p_ad, cell.p_mll, cell.p_both, cell.p_either, cell.fit_failures);
        os << line;
        csv << "cell," << fmt(cell.a) << ',' << fmt(cell.b) << ',' << cell.n << ',' << fmt(cell.p_ad) << ','
            << fmt(cell.p_mll) << ',' << fmt(cell.p_both) << ',' << fmt(cell.p_either) << ',' << cell.reps << ','
            << cell.fit_failures << '\n';
    }
    out.doc["grid"] = grid;

    os << "\naverages\n    n    P-AD   P-MLL  P-both P-either  cells\n";
    ordered_json avgs = ordered_json::array();
    for (std::size_t i = 0; i < iws_study_average_count(st.get()); ++i) {
        iws_study_average a{};
        check(iws_study_get_average(st.get(), i, &a));
        avgs.push_back({{"n", a.n},
                        {"p_ad", num(a.p_ad)},
                        {"p_mll", num(a.p_mll)},
                        {"p_both", num(a.p_both)},
                        {"p_either", num(a.p_either)},
                        {"cells", a.cells}});
        char line[160];
        std::snprintf(line, sizeof line, "%5d %7.4f %7.4f %7.4f %8.4f %6d\n", a.n, a.p_ad, a.p_mll, a.p_both,
                      a.p_either, a.cells);
        os << line;
        csv << "average,,," << a.n << ',' << fmt(a.p_ad) << ',' << fmt(a.p_mll) << ',' << fmt(a.p_both) << ','
            << fmt(a.p_either) << ',' << o.reps << ",\n";
    }
    out.doc["averages"] = avgs;

    size_t rows = 0;
    if (iws_study_pivotality_count(st.get(), &rows) == IWS_OK) {
        ordered_json piv = ordered_json::array();
        os << "\npivotality (spread across (a, b) cells vs 3 binomial SE)\n";
        for (size_t i = 0; i < rows; ++i) {
            iws_pivotality_row r{};
            check(iws_study_get_pivotality(st.get(), i, &r));
            piv.push_back({{"n", r.n},
                           {"index", r.index},
                           {"spread", num(r.spread)},
                           {"bound", num(r.bound)},
                           {"pass", static_cast<bool>(r.pass)}});
            char line[160];
            std::snprintf(line, sizeof line, "%5d %-6s spread %.4f bound %.4f %s\n", r.n, r.index, r.spread,
                          r.bound, r.pass ? "pass" : "FAIL");
            os << line;
        }
        out.doc["pivotality"] = piv;
    } else {
        os << "\npivotality: skipped (" << iws_last_error() << ")\n";
        out.doc["pivotality"] = nullptr;
    }

    if (!o.out.empty()) {
        write_text_file(o.out, csv.str());
        os << "\ntable written to " << o.out << '\n';
        out.doc["out"] = o.out;
    }
    out.text = os.str();
    return out;
}

namespace {

Report simulate_lifetimes(const Common& c, const SimulateOptions& o, const char* name, SamplePtr s, double a,
                          double b, ordered_json config) {
    const AdVerdict v = ad_against_iw(s.get(), a, b);
    Report out;
    out.doc["command"] = "simulate";
    out.doc["mechanism"] = name;
    out.doc["seed"] = c.seed;
    out.doc["config"] = std::move(config);
    out.doc["n"] = o.n;
    out.doc["model"] = "iw";
    out.doc["params"] = {{"a", num(a)}, {"b", num(b)}};
    out.doc["ad_stat"] = num(v.stat);
    out.doc["p_value"] = num(v.pvalue);
    out.doc["ad_pass"] = v.pass;

    std::ostringstream os;
    os << "simulate " << name << " (n = " << o.n << ", seed " << c.seed << ")\n";
    os << "  mapped IW  a = " << fmt(a) << ", b = " << fmt(b) << '\n';
    os << "  ad_stat    " << fmt(v.stat) << '\n';
    os << "  p_value    " << fmt(v.pvalue) << "  (known parameters)\n";
    os << "  verdict    " << (v.pass ? "pass" : "FAIL") << " at the 1% level\n";
    if (!o.out.empty()) {
        check(iws_sample_write_file(s.get(), o.out.c_str()));
        os << "  sample written to " << o.out << '\n';
        out.doc["out"] = o.out;
    }
    out.text = os.str();
    return out;
}

} // namespace

Report cmd_simulate(const Common& c, const SimulateOptions& o) {
    if (o.n == 0) throw Failure(2, "--n must be positive");
    const RngPtr rng = make_rng(c.seed);
    double a = 0.0;
    double b = 0.0;
    switch (o.mechanism) {
    case Mechanism::Deterioration: {
        const iws_deterioration cfg{o.k, o.h, o.v, o.d};
        check(iws_deterioration_iw(&cfg, &a, &b));
        iws_sample* s = nullptr;
        check(iws_simulate_deterioration(&cfg, o.n, rng.get(), &s));
        return simulate_lifetimes(c, o, "deterioration", SamplePtr(s), a, b,
                                  {{"k", num(o.k)}, {"h", num(o.h)}, {"v", num(o.v)}, {"d", num(o.d)}});
    }
    case Mechanism::StressStrength: {
        const iws_stress_strength cfg{o.u, o.v, o.k, o.h};
        check(iws_stress_strength_iw(&cfg, &a, &b));
        iws_sample* s = nullptr;
        check(iws_simulate_stress_strength(&cfg, o.n, rng.get(), &s));
        return simulate_lifetimes(c, o, "stress-strength", SamplePtr(s), a, b,
                                  {{"u", num(o.u)}, {"v", num(o.v)}, {"k", num(o.k)}, {"h", num(o.h)}});
    }
    case Mechanism::Defensive: {
        const iws_defensive cfg{o.beta, o.k, o.h};
        check(iws_defensive_iw(&cfg, &a, &b));
        if (o.t.empty()) throw Failure(2, "defensive: give at least one --t");
        Report out;
        out.doc["command"] = "simulate";
        out.doc["mechanism"] = "defensive";
        out.doc["seed"] = c.seed;
        out.doc["config"] = {{"beta", num(o.beta)}, {"k", num(o.k)}, {"h", num(o.h)}};
        out.doc["n"] = o.n;
        out.doc["model"] = "iw";
        out.doc["params"] = {{"a", num(a)}, {"b", num(b)}};
        std::ostringstream os;
        std::ostringstream csv;
        csv << "t,empirical_cdf,closed_form,se,z,within_3se\n";
        os << "simulate defensive (n = " << o.n << " per t, seed " << c.seed << ")\n";
        os << "  mapped IW  a = " << fmt(a) << ", b = " << fmt(b) << "\n\n";
        os << "         t   empirical  closed form        z\n";
        ordered_json rows = ordered_json::array();
        bool all_pass = true;
        for (double t : o.t) {
            double emp = 0.0;
            double closed = 0.0;
            check(iws_defensive_cdf(&cfg, t, &closed));
            check(iws_defensive_cdf_empirical(&cfg, t, o.n, rng.get(), c.threads, &emp));
            const double se = std::sqrt(closed * (1.0 - closed) / static_cast<double>(o.n));
            const double z = se > 0.0 ? (emp - closed) / se : (emp == closed ? 0.0 : INFINITY);
            const bool pass = std::abs(z) <= 3.0;
            all_pass = all_pass && pass;
            rows.push_back({{"t", num(t)},
                            {"empirical_cdf", num(emp)},
                            {"closed_form", num(closed)},
                            {"se", num(se)},
                            {"z", num(z)},
                            {"within_3se", pass}});
            char line[160];
            std::snprintf(line, sizeof line, "%10.6g %11.6f %12.6f %8.3f%s\n", t, emp, closed, z,
                          pass ? "" : "  outside 3 SE");
            os << line;
            csv << fmt(t) << ',' << fmt(emp) << ',' << fmt(closed) << ',' << fmt(se) << ',' << fmt(z) << ','
                << (pass ? "true" : "false") << '\n';
        }
        out.doc["rows"] = rows;
        out.doc["all_within_3se"] = all_pass;
        if (!o.out.empty()) {
            write_text_file(o.out, csv.str());
            os << "\ntable written to " << o.out << '\n';
            out.doc["out"] = o.out;
        }
        out.text = os.str();
        return out;
    }
    case Mechanism::MaxStability: {
        iws_max_stability r{};
        check(iws_max_stability_check(o.a, o.b, o.n_max, o.n, rng.get(), &r));
        Report out;
        out.doc["command"] = "simulate";
        out.doc["mechanism"] = "max-stability";
        out.doc["seed"] = c.seed;
        out.doc["config"] = {{"a", num(o.a)}, {"b", num(o.b)}, {"n_max", o.n_max}};
        out.doc["n"] = o.n;
        out.doc["model"] = "iw";
        out.doc["params"] = {{"a", num(r.target_a)}, {"b", num(r.target_b)}};
        out.doc["ad_stat"] = num(r.ad_stat);
        out.doc["p_value"] = num(r.p_value);
        out.doc["ad_pass"] = !r.rejected;
        out.doc["median_of_maxima"] = num(r.median_of_maxima);
        out.doc["target_median"] = num(r.target_median);
        std::ostringstream os;
        os << "simulate max-stability (" << o.n << " maxima of " << o.n_max << " draws, seed " << c.seed << ")\n";
        os << "  target IW  a = " << fmt(r.target_a) << ", b = " << fmt(r.target_b) << '\n';
        os << "  ad_stat    " << fmt(r.ad_stat) << '\n';
        os << "  p_value    " << fmt(r.p_value) << "  (known parameters)\n";
        os << "  verdict    " << (r.rejected ? "FAIL" : "pass") << " at the 1% level\n";
        os << "  median     " << fmt(r.median_of_maxima) << " (target " << fmt(r.target_median) << ")\n";
        out.text = os.str();
        return out;
    }
    }
    throw Failure(2, "unknown mechanism");
}

Report cmd_chart(const Common& c, const ChartOptions& o) {
    if (o.steps < 2) throw Failure(2, "--steps must be at least 2");
    struct Locus {
        const char* model;
        std::vector<double> range;
        double lower_limit; // exclusive; NAN if none
        iws_status (*fn)(double, double*, double*);
    };
    const Locus loci[] = {
        {"iw", o.b_range, 3.0, iws_iw_gamma23},
        {"ll", o.gamma_range, 3.0, iws_ll_gamma23},
        {"lognormal", o.lognormal_range, 0.0, iws_lognormal_gamma23},
    };
    std::ostringstream csv;
    std::ostringstream notes;
    Report out;
    out.doc["command"] = "chart";
    ordered_json rows = ordered_json::array();
    csv << "model,shape,gamma2,gamma3\n";
    for (const Locus& l : loci) {
        if (l.range.size() != 2 || !(l.range[0] < l.range[1])) {
            throw Failure(2, std::string(l.model) + " range must be two increasing values");
        }
        double lo = l.range[0];
        const double hi = l.range[1];
        if (!(lo > l.lower_limit)) {
            // Skewness diverges at the limit; start just inside it.
            lo = l.lower_limit == 0.0 ? 1e-3 : l.lower_limit + 0.05;
            notes << "note: " << l.model << " shape range clipped to start at " << fmt(lo)
                  << " (moments exist only above " << fmt(l.lower_limit) << ")\n";
            if (!(lo < hi)) throw Failure(2, std::string(l.model) + " range is empty after clipping");
        }
        for (int i = 0; i < o.steps; ++i) {
            const double shape = lo + (hi - lo) * i / (o.steps - 1);
            double g2 = 0.0;
            double g3 = 0.0;
            check(l.fn(shape, &g2, &g3));
            csv << l.model << ',' << fmt(shape) << ',' << fmt(g2) << ',' << fmt(g3) << '\n';
            rows.push_back({{"model", l.model}, {"shape", num(shape)}, {"gamma2", num(g2)}, {"gamma3", num(g3)}});
        }
    }
    auto add_point = [&](const InputSpec& spec) {
        const LoadedSample in = load_sample(spec);
        double g2 = 0.0;
        double g3 = 0.0;
        check(iws_sample_gamma23(in.sample.get(), &g2, &g3));
        csv << "sample:" << in.label << ",," << fmt(g2) << ',' << fmt(g3) << '\n';
        rows.push_back({{"model", "sample:" + in.label}, {"shape", nullptr}, {"gamma2", num(g2)}, {"gamma3", num(g3)}});
    };
    for (const auto& f : o.fixtures) add_point({f, ""});
    for (const auto& p : o.inputs) add_point({"", p});
    out.doc["rows"] = rows;
    std::cerr << notes.str();
    if (!notes.str().empty()) out.doc["notes"] = notes.str();
    if (!o.out.empty()) {
        write_text_file(o.out, csv.str());
        out.text = "chart rows written to " + o.out + "\n";
        out.doc["out"] = o.out;
    } else {
        out.text = csv.str();
    }
    (void)c;
    return out;
}

} // namespace cli
