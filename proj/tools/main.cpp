#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

// Default seed: IWSURV_SEED if set, else 1.
std::uint64_t default_seed() {
    const char* env = std::getenv("IWSURV_SEED");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
        throw cli::Failure(2, std::string("IWSURV_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
}

void add_common(CLI::App* app, cli::Common& c, std::string& format) {
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app->add_option("--seed", c.seed, "Random seed (default: $IWSURV_SEED or 1)");
    app->add_option("--threads", c.threads, "Worker threads, 0 = all cores");
}

void add_input(CLI::App* app, cli::InputSpec& in) {
    auto* f = app->add_option("--fixture", in.fixture, "Embedded data set A, B or C");
    auto* i = app->add_option("--input", in.path, "File with one positive value per line");
    f->excludes(i);
}

} // namespace

int main(int argc, char** argv) {
    cli::Common common;
    std::string format = "text";
    try {
        common.seed = default_seed();
    } catch (const cli::Failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    }

    CLI::App app{"Inverse Weibull survival analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(iws_version()));

    cli::FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one model by maximum likelihood");
    add_input(fit_cmd, fit.input);
    fit_cmd->add_option("--model", fit.model, "iw, ll, poly or weibull")
        ->check(CLI::IsMember({"iw", "ll", "poly", "weibull"}));
    fit_cmd->add_option("--reps", fit.reps, "Bootstrap replicates for the AD p-value, 0 to skip");
    add_common(fit_cmd, common, format);

    cli::SelectOptions sel;
    auto* sel_cmd = app.add_subcommand("select", "Inverse Weibull vs Log-Logistic selection");
    add_input(sel_cmd, sel.input);
    sel_cmd->add_option("--reps", sel.reps, "Bootstrap replicates for the AD p-values, 0 to skip");
    add_common(sel_cmd, common, format);

    cli::StudyOptions study;
    auto* study_cmd = app.add_subcommand("study", "Monte Carlo probability of correct selection");
    study_cmd->add_option("--a-list", study.a_list, "IW scales")->delimiter(',');
    study_cmd->add_option("--b-list", study.b_list, "IW shapes")->delimiter(',');
    study_cmd->add_option("--n-list", study.n_list, "Sample sizes")->delimiter(',');
    study_cmd->add_option("--reps", study.reps, "Replicates per cell");
    study_cmd->add_flag("--independent-cells", study.independent_cells,
                        "Give every (a, b) cell its own random streams");
    study_cmd->add_option("--out", study.out, "Write the grid and averages as CSV");
    add_common(study_cmd, common, format);

    cli::SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a generative mechanism");
    sim_cmd->require_subcommand(1);
    auto* det = sim_cmd->add_subcommand("deterioration", "Power-law deterioration reaching a threshold");
    // --h is a model parameter here, so help is --help only.
    det->set_help_flag("--help", "Print this help message and exit");
    det->add_option("--k", sim.k, "Drift coefficient")->required();
    det->add_option("--h", sim.h, "Drift exponent")->required();
    det->add_option("--v", sim.v, "Weibull shape of the level")->required();
    det->add_option("--d", sim.d, "Failure threshold")->required();
    auto* ss = sim_cmd->add_subcommand("stress-strength", "Random stress against decaying strength");
    ss->set_help_flag("--help", "Print this help message and exit");
    ss->add_option("--u", sim.u, "Stress Weibull scale")->required();
    ss->add_option("--v", sim.v, "Stress Weibull shape")->required();
    ss->add_option("--k", sim.k, "Strength coefficient")->required();
    ss->add_option("--h", sim.h, "Strength decay exponent")->required();
    auto* def = sim_cmd->add_subcommand("defensive", "Poisson defensive attempts; empirical Cdf at given times");
    def->set_help_flag("--help", "Print this help message and exit");
    def->add_option("--beta", sim.beta, "Attempt rate")->required();
    def->add_option("--k", sim.k, "Success coefficient")->required();
    def->add_option("--h", sim.h, "Success exponent, > 1")->required();
    def->add_option("--t", sim.t, "Evaluation times (comma separated)")->required()->delimiter(',');
    auto* mx = sim_cmd->add_subcommand("max-stability", "Maxima of IW draws against the max-stable target");
    mx->add_option("--a", sim.a, "IW scale")->required();
    mx->add_option("--b", sim.b, "IW shape")->required();
    mx->add_option("--n-max", sim.n_max, "Draws per maximum");
    bool n_set_defensive = false;
    for (auto* sub : {det, ss, def, mx}) {
        auto* n_opt = sub->add_option("--n", sim.n, "Number of simulated lifetimes (maxima, trials)");
        if (sub == def) n_opt->each([&](const std::string&) { n_set_defensive = true; });
        sub->add_option("--out", sim.out, "Write the sample (or table) to this file");
        add_common(sub, common, format);
    }

    cli::ChartOptions chart;
    auto* chart_cmd = app.add_subcommand("chart", "Coefficient of variation against skewness loci");
    chart_cmd->add_option("--b-range", chart.b_range, "IW shape range lo,hi")->delimiter(',')->expected(2);
    chart_cmd->add_option("--gamma-range", chart.gamma_range, "Log-Logistic shape range lo,hi")
        ->delimiter(',')
        ->expected(2);
    chart_cmd->add_option("--lognormal-range", chart.lognormal_range, "Log-Normal shape range lo,hi")
        ->delimiter(',')
        ->expected(2);
    chart_cmd->add_option("--steps", chart.steps, "Points per locus");
    chart_cmd->add_option("--fixture", chart.fixtures, "Add the sample point of a fixture")->delimiter(',');
    chart_cmd->add_option("--input", chart.inputs, "Add the sample point of a data file");
    chart_cmd->add_option("--out", chart.out, "Write CSV rows to this file");
    add_common(chart_cmd, common, format);

    cli::ReproOptions repro;
    auto* repro_cmd = app.add_subcommand("repro", "Regenerate the reference numbers and compare");
    repro_cmd->add_option("section", repro.section, "table1, table2, s4, s5, s7 or all")
        ->check(CLI::IsMember({"table1", "table2", "s4", "s5", "s7", "all"}));
    repro_cmd->add_option("--reps", repro.reps, "Monte Carlo replicates");
    add_common(repro_cmd, common, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    common.format = format == "json" ? cli::Format::Json : cli::Format::Text;

    try {
        cli::Report report;
        if (*fit_cmd) {
            report = cli::cmd_fit(common, fit);
        } else if (*sel_cmd) {
            report = cli::cmd_select(common, sel);
        } else if (*study_cmd) {
            report = cli::cmd_study(common, study);
        } else if (*sim_cmd) {
            if (*det) sim.mechanism = cli::Mechanism::Deterioration;
            if (*ss) sim.mechanism = cli::Mechanism::StressStrength;
            if (*def) {
                sim.mechanism = cli::Mechanism::Defensive;
                if (!n_set_defensive) sim.n = 1000000;
            }
            if (*mx) sim.mechanism = cli::Mechanism::MaxStability;
            report = cli::cmd_simulate(common, sim);
        } else if (*chart_cmd) {
            report = cli::cmd_chart(common, chart);
        } else if (*repro_cmd) {
            report = cli::cmd_repro(common, repro);
        }
        cli::emit(common, report);
    } catch (const cli::Failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
