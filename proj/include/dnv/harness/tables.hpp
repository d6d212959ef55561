#pragma once

#include "dnv/adversary.hpp"
#include "dnv/bounds.hpp"
#include "dnv/clustered.hpp"
#include "dnv/harness/output.hpp"
#include "dnv/harness/sweep.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace dnv::harness {

inline CsvTable sweep_table(const std::vector<SweepResult>& rows, double floor = 1e-12) {
    CsvTable t({"label", "q", "n", "mean_regret", "percentile_regret", "std_error", "reps",
                "exact_expected", "log_clamped", "seed"});
    for (const auto& r : rows) {
        const bool clamped = r.mean_regret < floor || r.percentile_regret < floor ||
                             (r.exact_expected && *r.exact_expected < floor);
        t.add_row({r.label, format_double(r.q), format_int(r.n), format_double(r.mean_regret),
                   format_double(r.percentile_regret), format_double(r.std_error), format_int(r.reps),
                   r.exact_expected ? format_double(*r.exact_expected) : "", format_bool(clamped),
                   std::to_string(r.seed)});
    }
    return t;
}

inline CsvTable delta_table(const std::vector<DeltaRow>& rows) {
    CsvTable t({"label", "q", "eps", "inv_eps2", "delta"});
    for (const auto& r : rows) {
        t.add_row({r.label, format_double(r.q), format_double(r.eps), format_double(r.inv_eps2),
                   format_double(r.delta)});
    }
    return t;
}

inline std::string tau_cell(const ClusterParams& p) { return p.tau ? format_double(*p.tau) : ""; }

struct BoundRow {
    std::string bound;
    double q = 0.0;
    ClusterParams params;
    std::optional<double> delta;
    std::int64_t n = 0;
    BoundResult result;
};

inline CsvTable bounds_table(const std::vector<BoundRow>& rows) {
    CsvTable t({"bound", "q", "beta", "gamma", "zeta", "tau", "delta", "n", "value", "min_n",
                "applicable"});
    for (const auto& r : rows) {
        t.add_row({r.bound, format_double(r.q), format_double(r.params.beta),
                   format_double(r.params.gamma), format_double(r.params.zeta), tau_cell(r.params),
                   r.delta ? format_double(*r.delta) : "", format_int(r.n),
                   format_double(r.result.value), format_int(r.result.min_n),
                   format_bool(r.result.applicable)});
    }
    return t;
}

inline CsvTable bound_check_table(const std::vector<BoundCheckRow>& rows) {
    CsvTable t({"label", "q", "n", "beta", "gamma", "zeta", "delta", "mean_regret",
                "percentile_regret", "exact_expected", "exp_add_bound", "hp_add_bound", "hp_min_n",
                "hp_applicable", "hp_violation", "exp_violation", "skipped", "note"});
    for (const auto& r : rows) {
        t.add_row({r.label, format_double(r.q), format_int(r.n), format_double(r.params.beta),
                   format_double(r.params.gamma), format_double(r.params.zeta), format_double(r.delta),
                   format_double(r.mean_regret), format_double(r.percentile_regret),
                   format_double(r.exact_expected), format_double(r.exp_add), format_double(r.hp_add),
                   format_int(r.hp_min_n), format_bool(r.hp_applicable), format_bool(r.hp_violation),
                   format_bool(r.exp_violation), format_bool(r.skipped), r.note});
    }
    return t;
}

struct AdversaryRow {
    HardPair pair;
    AdversaryOutcome outcome;
    double h2 = 0.0;
    double tv_bound = 0.0;
};

inline CsvTable adversary_table(const std::vector<AdversaryRow>& rows) {
    CsvTable t({"construction", "q", "beta", "gamma", "zeta", "tau", "n", "reps", "threshold", "freq_P",
                "freq_Q", "tv_bound", "h2"});
    for (const auto& r : rows) {
        const auto& p = r.pair;
        t.add_row({pair_kind_name(p.kind), format_double(p.q), format_double(p.params.beta),
                   format_double(p.params.gamma), format_double(p.params.zeta), tau_cell(p.params),
                   format_int(p.n), format_int(r.outcome.reps), format_double(r.outcome.threshold),
                   format_double(r.outcome.freq_P), format_double(r.outcome.freq_Q),
                   format_double(r.tv_bound), format_double(r.h2)});
    }
    return t;
}

struct VerifyRow {
    std::string label;
    double q = 0.0;
    ClusterParams params;
    ClusterReport report;
    double min_beta = 0.0;
};

inline CsvTable verify_table(const std::vector<VerifyRow>& rows) {
    CsvTable t({"label", "q", "beta", "gamma", "zeta", "holds", "worst_point", "worst_ratio",
                "grid_size", "min_beta"});
    for (const auto& r : rows) {
        t.add_row({r.label, format_double(r.q), format_double(r.params.beta),
                   format_double(r.params.gamma), format_double(r.params.zeta),
                   format_bool(r.report.holds), format_double(r.report.worst_point),
                   format_double(r.report.worst_ratio), format_int(static_cast<std::int64_t>(r.report.grid_size)),
                   format_double(r.min_beta)});
    }
    return t;
}

inline CsvTable min_pdf_table(const std::vector<MinPdfRow>& rows) {
    CsvTable t({"label", "zeta", "min_density", "inv_min_density"});
    for (const auto& r : rows) {
        t.add_row({r.label, format_double(r.zeta), format_double(r.min_density),
                   format_double(r.inv_min_density)});
    }
    return t;
}

/// One chart per q: mean (or percentile) regret against n, one line per label.
inline std::map<double, std::string> sweep_charts(const std::vector<SweepResult>& rows, bool percentile,
                                                  double floor = 1e-12) {
    std::map<double, std::map<std::string, Series>> by_q;
    for (const auto& r : rows) {
        auto& s = by_q[r.q][r.label];
        s.name = r.label;
        s.points.emplace_back(static_cast<double>(r.n), percentile ? r.percentile_regret : r.mean_regret);
    }
    std::map<double, std::string> out;
    for (auto& [q, m] : by_q) {
        std::vector<Series> series;
        for (auto& [label, s] : m) series.push_back(std::move(s));
        ChartSpec spec{(percentile ? "Percentile additive regret, q=" : "Mean additive regret, q=") +
                           format_double(q),
                       "n", percentile ? "percentile regret" : "mean regret", false, floor};
        out[q] = render_svg(spec, series);
    }
    return out;
}

/// Delta(eps) against 1/eps^2, one chart per q.
inline std::map<double, std::string> delta_charts(const std::vector<DeltaRow>& rows, double floor = 1e-12) {
    std::map<double, std::map<std::string, Series>> by_q;
    for (const auto& r : rows) {
        auto& s = by_q[r.q][r.label];
        s.name = r.label;
        s.points.emplace_back(r.inv_eps2, r.delta);
    }
    std::map<double, std::string> out;
    for (auto& [q, m] : by_q) {
        std::vector<Series> series;
        for (auto& [label, s] : m) series.push_back(std::move(s));
        ChartSpec spec{"Delta(eps), q=" + format_double(q), "1/eps^2", "Delta(eps)", true, floor};
        out[q] = render_svg(spec, series);
    }
    return out;
}

}  // namespace dnv::harness
