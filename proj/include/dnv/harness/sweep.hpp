#pragma once

#include "dnv/bounds.hpp"
#include "dnv/clustered.hpp"
#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/newsvendor.hpp"
#include "dnv/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace dnv::harness {

struct LabeledDistribution {
    std::string label;
    Distribution dist;
    std::vector<double> q_values;  ///< overrides SweepConfig::q_values when nonempty
};

inline std::vector<std::int64_t> default_n_grid() {
    std::vector<std::int64_t> g{1};
    for (std::int64_t n = 5; n <= 200; n += 5) g.push_back(n);
    return g;
}

struct SweepConfig {
    std::vector<LabeledDistribution> distributions;
    std::vector<double> q_values{0.4, 0.9};
    std::vector<std::int64_t> n_grid = default_n_grid();
    std::int64_t reps = 10000;
    double percentile = 0.95;
    std::uint64_t master_seed = 20240601;
    bool exact = true;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency
    double mean_cap = 14.0;
};

struct SweepResult {
    std::string label;
    double q = 0.0;
    std::int64_t n = 0;
    double mean_regret = 0.0;
    double percentile_regret = 0.0;
    double std_error = 0.0;
    std::int64_t reps = 0;
    std::optional<double> exact_expected;
    std::uint64_t seed = 0;
};

inline void validate(const SweepConfig& cfg) {
    if (cfg.distributions.empty()) throw ValidationError("sweep: no distributions");
    if (cfg.n_grid.empty()) throw ValidationError("sweep: empty n grid");
    if (cfg.reps < 1) throw ValidationError("sweep: reps must be >= 1");
    if (!(cfg.percentile > 0.0 && cfg.percentile < 1.0)) {
        throw ValidationError("sweep: percentile must lie in (0,1)");
    }
    for (auto n : cfg.n_grid) {
        if (n < 1) throw ValidationError("sweep: n grid entries must be >= 1");
    }
    for (const auto& d : cfg.distributions) {
        const double mu = d.dist.mean();
        if (!std::isfinite(mu)) throw ValidationError("sweep: " + d.label + " has infinite mean");
        if (mu > cfg.mean_cap) {
            throw ValidationError("sweep: " + d.label + " has mean " + dnv::detail::fmt(mu) +
                                  " above the cap " + dnv::detail::fmt(cfg.mean_cap));
        }
        const auto& qs = d.q_values.empty() ? cfg.q_values : d.q_values;
        if (qs.empty()) throw ValidationError("sweep: no q values for " + d.label);
        for (double q : qs) {
            if (!(q > 0.0 && q < 1.0)) throw ValidationError("sweep: q must lie in (0,1)");
        }
    }
}

/// The percentile order statistic: the ceil(reps * p)-th smallest value.
inline double order_statistic(std::vector<double> v, double p) {
    auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(v.size()) * p));
    k = std::clamp<std::size_t>(k, 1, v.size());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
    return v[k - 1];
}

inline std::uint64_t cell_seed(std::uint64_t master, const std::string& label, double q,
                               std::int64_t n, std::int64_t rep) {
    return derive_seed(master, {hash_label(label), hash_double(q), static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(rep)});
}

/// SAA decision from n inverse-transform draws. Only the ceil(nq)-th order
/// statistic is needed, and since the quantile function is monotone it can
/// be taken on the uniforms before transforming.
inline double draw_saa_action(const Distribution& d, double q, std::int64_t n, Engine& eng,
                              std::vector<double>& scratch) {
    scratch.resize(static_cast<std::size_t>(n));
    for (auto& u : scratch) u = uniform_open01(eng);
    const auto k = static_cast<std::size_t>(min_count(n, q) - 1);
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
    return d.quantile(scratch[k]);
}

/// Per-repetition additive regrets of SAA for one (distribution, q, n) cell.
inline std::vector<double> cell_regrets(const std::string& label, const NewsvendorInstance& inst,
                                        std::int64_t n, std::int64_t reps, std::uint64_t master) {
    const RegretEvaluator regret(inst);
    std::vector<double> out(static_cast<std::size_t>(reps));
    std::vector<double> scratch;
    for (std::int64_t r = 0; r < reps; ++r) {
        Engine eng(cell_seed(master, label, inst.q(), n, r));
        out[static_cast<std::size_t>(r)] = regret(draw_saa_action(inst.dist(), inst.q(), n, eng, scratch));
    }
    return out;
}

inline SweepResult summarize(const std::string& label, double q, std::int64_t n,
                             const std::vector<double>& regrets, double percentile) {
    SweepResult s;
    s.label = label;
    s.q = q;
    s.n = n;
    s.reps = static_cast<std::int64_t>(regrets.size());
    double sum = 0.0;
    for (double r : regrets) sum += r;
    const double mean = sum / static_cast<double>(regrets.size());
    double ss = 0.0;
    for (double r : regrets) ss += (r - mean) * (r - mean);
    const double var = regrets.size() > 1 ? ss / static_cast<double>(regrets.size() - 1) : 0.0;
    s.mean_regret = mean;
    s.std_error = std::sqrt(var / static_cast<double>(regrets.size()));
    s.percentile_regret = order_statistic(regrets, percentile);
    return s;
}

/// Runs tasks 0..count-1 on a small thread pool; the first exception is
/// rethrown after all workers finish.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
    unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

/// Monte-Carlo regret of SAA over every (distribution, q, n) cell, sorted by
/// label, q and n.
inline std::vector<SweepResult> run_regret_sweep(const SweepConfig& cfg) {
    validate(cfg);
    struct Cell {
        std::size_t dist;
        double q;
        std::int64_t n;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < cfg.distributions.size(); ++i) {
        const auto& d = cfg.distributions[i];
        for (double q : d.q_values.empty() ? cfg.q_values : d.q_values) {
            for (auto n : cfg.n_grid) cells.push_back({i, q, n});
        }
    }
    std::vector<SweepResult> out(cells.size());
    parallel_for(cells.size(), cfg.threads, [&](std::size_t c) {
        const auto& cell = cells[c];
        const auto& ld = cfg.distributions[cell.dist];
        const NewsvendorInstance inst(cell.q, ld.dist);
        const auto regrets = cell_regrets(ld.label, inst, cell.n, cfg.reps, cfg.master_seed);
        auto s = summarize(ld.label, cell.q, cell.n, regrets, cfg.percentile);
        s.seed = cfg.master_seed;
        if (cfg.exact) s.exact_expected = exact_expected_regret(inst, cell.n);
        out[c] = std::move(s);
    });
    std::stable_sort(out.begin(), out.end(), [](const SweepResult& a, const SweepResult& b) {
        return std::tie(a.label, a.q, a.n) < std::tie(b.label, b.q, b.n);
    });
    return out;
}

struct DeltaRow {
    std::string label;
    double q = 0.0;
    double eps = 0.0;
    double inv_eps2 = 0.0;
    double delta = 0.0;
};

inline std::vector<double> default_eps_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 40; ++i) g.push_back(0.5 * std::pow(10.0, -2.0 * i / 40.0));
    return g;
}

inline std::vector<DeltaRow> run_delta_sweep(const std::vector<LabeledDistribution>& dists,
                                             const std::vector<double>& q_values,
                                             const std::vector<double>& eps_grid) {
    for (double e : eps_grid) {
        if (!(e > 0.0)) throw ValidationError("delta sweep: eps values must be positive");
    }
    std::vector<DeltaRow> out;
    for (const auto& d : dists) {
        for (double q : d.q_values.empty() ? q_values : d.q_values) {
            const NewsvendorInstance inst(q, d.dist);
            for (double e : eps_grid) {
                out.push_back({d.label, q, e, 1.0 / (e * e), delta_epsilon(inst, e)});
            }
        }
    }
    return out;
}

/// A distribution with the clustering parameters it is claimed to satisfy.
struct ClusteredCase {
    std::string label;
    Distribution dist;
    double q = 0.5;
    ClusterParams params;
};

struct BoundCheckRow {
    std::string label;
    double q = 0.0;
    std::int64_t n = 0;
    ClusterParams params;
    double delta = 0.05;
    double mean_regret = 0.0;
    double percentile_regret = 0.0;
    double exact_expected = 0.0;
    double exp_add = 0.0;
    double hp_add = 0.0;
    std::int64_t hp_min_n = 0;
    bool hp_applicable = false;
    bool hp_violation = false;
    bool exp_violation = false;
    bool skipped = false;
    std::string note;
};

struct BoundCheckConfig {
    std::vector<ClusteredCase> cases;
    std::vector<std::int64_t> n_grid{10, 50, 200, 1000, 2000};
    std::int64_t reps = 10000;
    double delta = 0.05;
    std::uint64_t master_seed = 20240601;
    std::size_t verify_grid = 2001;
    unsigned threads = 0;
};

/// Compares the (1-delta) empirical percentile with the high-probability
/// additive bound and the exact expected regret with the expectation bound.
/// Cases whose clustering claim does not verify are skipped.
inline std::vector<BoundCheckRow> run_bound_check(const BoundCheckConfig& cfg) {
    struct Cell {
        std::size_t c;
        std::int64_t n;
    };
    std::vector<Cell> cells;
    std::vector<BoundCheckRow> skipped;
    for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
        const auto& cs = cfg.cases[i];
        const NewsvendorInstance inst(cs.q, cs.dist);
        const auto rep = verify_clustered(inst, cs.params, cfg.verify_grid);
        if (!rep.holds) {
            BoundCheckRow row;
            row.label = cs.label;
            row.q = cs.q;
            row.params = cs.params;
            row.delta = cfg.delta;
            row.skipped = true;
            row.note = "clustering claim fails: ratio " + dnv::detail::fmt(rep.worst_ratio) + " at " +
                       dnv::detail::fmt(rep.worst_point);
            skipped.push_back(row);
            continue;
        }
        for (auto n : cfg.n_grid) cells.push_back({i, n});
    }
    std::vector<BoundCheckRow> out(cells.size());
    parallel_for(cells.size(), cfg.threads, [&](std::size_t k) {
        const auto& cs = cfg.cases[cells[k].c];
        const auto n = cells[k].n;
        const NewsvendorInstance inst(cs.q, cs.dist);
        const auto regrets = cell_regrets(cs.label, inst, n, cfg.reps, cfg.master_seed);
        const auto s = summarize(cs.label, cs.q, n, regrets, 1.0 - cfg.delta);
        BoundCheckRow row;
        row.label = cs.label;
        row.q = cs.q;
        row.n = n;
        row.params = cs.params;
        row.delta = cfg.delta;
        row.mean_regret = s.mean_regret;
        row.percentile_regret = s.percentile_regret;
        row.exact_expected = exact_expected_regret(inst, n);
        const BoundQuery qr{cs.q, cs.params, n, cfg.delta, cs.dist.mean()};
        const auto hp = hp_add_bound(qr);
        const auto ex = exp_add_bound(qr);
        row.hp_add = hp.value;
        row.hp_min_n = hp.min_n;
        row.hp_applicable = hp.applicable;
        row.exp_add = ex.value;
        row.hp_violation = hp.applicable && !(row.percentile_regret < hp.value);
        row.exp_violation = !(row.exact_expected < ex.value);
        out[k] = std::move(row);
    });
    out.insert(out.end(), skipped.begin(), skipped.end());
    return out;
}

struct MinPdfRow {
    std::string label;
    double zeta = 0.0;
    double min_density = 0.0;
    double inv_min_density = 0.0;
};

struct MinPdfTables {
    std::vector<SweepResult> regret;
    std::vector<MinPdfRow> min_pdf;
    std::vector<DeltaRow> delta;
};

/// Minimum of the density over [center - zeta, center + zeta].
inline double min_density(const Distribution& d, double center, double zeta, int grid = 2001) {
    double m = kInf;
    for (int i = 0; i < grid; ++i) {
        const double z = center - zeta + 2.0 * zeta * i / (grid - 1);
        const double z_in = std::clamp(z, std::nextafter(center - zeta, kInf),
                                       std::nextafter(center + zeta, -kInf));
        m = std::min(m, d.density(z_in));
    }
    return std::min(m, d.density(center));
}

/// A V-shaped density whose minimum sits at the optimal action, against
/// Uniform(0,1), at q = 0.5.
inline MinPdfTables run_minpdf_counterexample(const std::vector<std::int64_t>& n_grid, std::int64_t reps,
                                              std::uint64_t seed, double a = 0.5, double b = 1.0,
                                              unsigned threads = 0) {
    const std::vector<LabeledDistribution> dists{{"red", make_vshaped(a, b), {0.5}},
                                                 {"uniform", make_uniform(0.0, 1.0), {0.5}}};
    MinPdfTables t;
    SweepConfig cfg;
    cfg.distributions = dists;
    cfg.q_values = {0.5};
    cfg.n_grid = n_grid;
    cfg.reps = reps;
    cfg.master_seed = seed;
    cfg.threads = threads;
    t.regret = run_regret_sweep(cfg);
    for (const auto& d : dists) {
        for (int i = 1; i <= 10; ++i) {
            const double zeta = 0.05 * i;
            const double m = min_density(d.dist, 0.5, zeta);
            t.min_pdf.push_back({d.label, zeta, m, 1.0 / m});
        }
    }
    t.delta = run_delta_sweep(dists, {0.5}, default_eps_grid());
    return t;
}

}  // namespace dnv::harness
