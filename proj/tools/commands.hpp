#pragma once

#include "capi.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

enum class Format { Text, Json };

struct Common {
    Format format = Format::Text;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct InputSpec {
    std::string fixture;
    std::string path;
};

/// Loaded sample plus a label for reports ("fixture A" or the file path).
struct LoadedSample {
    SamplePtr sample;
    std::string label;
};

LoadedSample load_sample(const InputSpec& in, std::size_t min_size = 3);

/// JSON or text rendering of a finished command.
struct Report {
    nlohmann::ordered_json doc;
    std::string text;
};

void emit(const Common& c, const Report& r);

nlohmann::ordered_json params_json(iws_model_kind kind, const double* p, std::size_t n);
nlohmann::ordered_json num(double x);
nlohmann::ordered_json fit_report_json(const iws_fit_report& r);

struct FitOptions {
    InputSpec input;
    std::string model = "iw";
    int reps = 1000;
};
Report cmd_fit(const Common& c, const FitOptions& o);

struct SelectOptions {
    InputSpec input;
    int reps = 1000;
};
Report cmd_select(const Common& c, const SelectOptions& o);

struct StudyOptions {
    std::vector<double> a_list{1.0, 2.0, 3.0};
    std::vector<double> b_list{1.1, 2.1, 3.1, 4.1, 5.1};
    std::vector<int> n_list{10, 30, 50};
    int reps = 1000;
    bool independent_cells = false;
    std::string out;
};
Report cmd_study(const Common& c, const StudyOptions& o);

enum class Mechanism { Deterioration, StressStrength, Defensive, MaxStability };

struct SimulateOptions {
    Mechanism mechanism = Mechanism::Deterioration;
    double k = 1.0, h = 1.0, v = 1.0, d = 1.0;
    double u = 1.0;
    double beta = 1.0;
    std::vector<double> t;
    double a = 1.0, b = 2.0;
    int n_max = 10;
    std::size_t n = 100000;
    std::string out;
};
Report cmd_simulate(const Common& c, const SimulateOptions& o);

struct ChartOptions {
    std::vector<double> b_range{3.2, 20.0};
    std::vector<double> gamma_range{3.2, 20.0};
    std::vector<double> lognormal_range{0.05, 1.2};
    int steps = 100;
    std::vector<std::string> fixtures;
    std::vector<std::string> inputs;
    std::string out;
};
Report cmd_chart(const Common& c, const ChartOptions& o);

struct ReproOptions {
    std::string section = "all";
    int reps = 1000;
};
Report cmd_repro(const Common& c, const ReproOptions& o);

} // namespace cli
