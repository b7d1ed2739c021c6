#include "iwsurv/errors.hpp"
#include "iwsurv/gof.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace iwsurv {

namespace {

constexpr double kMaxFailureFraction = 0.05;

void validate(const SelectionStudyConfig& c) {
    if (c.a_list.empty() || c.b_list.empty() || c.n_list.empty()) {
        throw DomainError("selection_study: a, b and n lists must be non-empty");
    }
    for (double a : c.a_list) {
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("selection_study: a values must be positive");
    }
    for (double b : c.b_list) {
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("selection_study: b values must be positive");
    }
    for (int n : c.n_list) {
        if (n < 3) throw DomainError("selection_study: sample sizes must be at least 3");
    }
    if (c.reps < 1) {
        throw DomainError("selection_study: reps must be positive");
    }
}

} // namespace

SelectionStudyResult selection_study(const SelectionStudyConfig& config) {
    validate(config);
    struct CellSpec {
        double a;
        double b;
        int n;
        std::size_t n_index;
    };
    std::vector<CellSpec> cells;
    for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
        for (double a : config.a_list) {
            for (double b : config.b_list) {
                cells.push_back({a, b, config.n_list[ni], ni});
            }
        }
    }
    const std::size_t reps = static_cast<std::size_t>(config.reps);

    const auto outcomes = detail::parallel_map(cells.size() * reps, config.threads, [&](std::size_t task) {
        const std::size_t cell_index = task / reps;
        const std::size_t rep = task % reps;
        const CellSpec& cell = cells[cell_index];
        const std::uint64_t stream_key =
            config.layout == StreamLayout::CommonAcrossCells ? cell.n_index : cell_index;
        RandomStream rng = RandomStream::substream(config.seed, stream_key, rep);
        const InverseWeibull parent({cell.a, cell.b});
        return score_replicate(Sample(parent.sample(static_cast<std::size_t>(cell.n), rng)));
    });

    SelectionStudyResult result;
    result.seed = config.seed;
    result.layout = config.layout;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        int ad = 0;
        int mll = 0;
        int both = 0;
        int either = 0;
        int failures = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const ReplicateOutcome& o = outcomes[c * reps + r];
            ad += o.iw_wins_ad;
            mll += o.iw_wins_mll;
            both += o.iw_wins_ad && o.iw_wins_mll;
            either += o.iw_wins_ad || o.iw_wins_mll;
            failures += o.failed;
        }
        if (failures > kMaxFailureFraction * config.reps) {
            throw StudyError("selection_study: " + std::to_string(failures) + " of " +
                             std::to_string(config.reps) + " replicates failed to fit in cell (a=" +
                             std::to_string(cells[c].a) + ", b=" + std::to_string(cells[c].b) +
                             ", n=" + std::to_string(cells[c].n) + ")");
        }
        const double dr = static_cast<double>(config.reps);
        result.grid.push_back({cells[c].a, cells[c].b, cells[c].n, ad / dr, mll / dr, both / dr, either / dr,
                               config.reps,
                               failures});
    }
    for (int n : config.n_list) {
        StudyAverage avg{n, 0.0, 0.0, 0.0, 0.0, 0};
        for (const auto& cell : result.grid) {
            if (cell.n != n) continue;
            avg.p_ad += cell.p_ad;
            avg.p_mll += cell.p_mll;
            avg.p_both += cell.p_both;
            avg.p_either += cell.p_either;
            ++avg.cells;
        }
        avg.p_ad /= avg.cells;
        avg.p_mll /= avg.cells;
        avg.p_both /= avg.cells;
        avg.p_either /= avg.cells;
        result.averages.push_back(avg);
    }
    return result;
}

std::vector<PivotalityRow> pivotality_check(const SelectionStudyResult& result) {
    std::vector<PivotalityRow> rows;
    for (const StudyAverage& avg : result.averages) {
        std::vector<const StudyCell*> cells;
        for (const auto& c : result.grid) {
            if (c.n == avg.n) cells.push_back(&c);
        }
        if (cells.size() < 2) {
            throw DomainError("pivotality_check: need at least two (a, b) cells for n = " + std::to_string(avg.n));
        }
        const double reps = static_cast<double>(cells.front()->reps);
        auto row = [&](const char* name, double mean, double StudyCell::*field) {
            double lo = 1.0;
            double hi = 0.0;
            for (const StudyCell* c : cells) {
                lo = std::min(lo, c->*field);
                hi = std::max(hi, c->*field);
            }
            const double bound = 3.0 * std::sqrt(mean * (1.0 - mean) / reps);
            const double spread = hi - lo;
            rows.push_back({avg.n, name, spread, bound, spread <= bound});
        };
        row("P-AD", avg.p_ad, &StudyCell::p_ad);
        row("P-MLL", avg.p_mll, &StudyCell::p_mll);
    }
    return rows;
}

} // namespace iwsurv
