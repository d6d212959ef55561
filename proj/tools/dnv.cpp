#include "dnv/dnv.hpp"
#include "dnv/harness/config.hpp"
#include "dnv/harness/output.hpp"
#include "dnv/harness/sweep.hpp"
#include "dnv/harness/tables.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dnv;
using namespace dnv::harness;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> reps;
    std::optional<double> percentile;
    std::string format;
    unsigned threads = 0;
};

RunConfig resolve(const Options& o) {
    RunConfig cfg = o.config.empty() ? default_run_config() : load_run_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (!o.format.empty()) cfg.format = o.format;
    if (cfg.format != "csv" && cfg.format != "svg") {
        throw ValidationError("--format must be csv or svg, got '" + cfg.format + "'");
    }
    if (o.seed) cfg.sweep.master_seed = cfg.bound_check.master_seed = *o.seed;
    if (o.reps) cfg.sweep.reps = cfg.bound_check.reps = *o.reps;
    if (o.percentile) cfg.sweep.percentile = *o.percentile;
    cfg.sweep.threads = cfg.bound_check.threads = o.threads;
    return cfg;
}

void emit(const fs::path& path, const std::string& text) {
    write_text(path, text);
    std::cout << "wrote " << path.string() << "\n";
}

void emit_charts(const fs::path& dir, const std::string& stem, const std::map<double, std::string>& charts) {
    for (const auto& [q, svg] : charts) emit(dir / (stem + "_q" + format_double(q) + ".svg"), svg);
}

int cmd_sweep(const RunConfig& cfg) {
    const auto rows = run_regret_sweep(cfg.sweep);
    const fs::path dir = cfg.out_dir;
    if (cfg.format == "csv") {
        emit(dir / "sweep.csv", sweep_table(rows).str());
    } else {
        emit_charts(dir, "sweep_mean", sweep_charts(rows, false));
        emit_charts(dir, "sweep_percentile", sweep_charts(rows, true));
    }
    return 0;
}

int cmd_delta(const RunConfig& cfg) {
    const auto rows = run_delta_sweep(cfg.sweep.distributions, cfg.sweep.q_values, cfg.eps_grid);
    const fs::path dir = cfg.out_dir;
    if (cfg.format == "csv") {
        emit(dir / "delta.csv", delta_table(rows).str());
    } else {
        emit_charts(dir, "delta", delta_charts(rows));
    }
    return 0;
}

std::vector<BoundRow> formula_rows(const RunConfig& cfg) {
    std::vector<BoundRow> rows;
    const double delta = cfg.bound_check.delta;
    for (const auto& cs : cfg.clustered) {
        for (auto n : cfg.bound_check.n_grid) {
            const BoundQuery qr{cs.q, cs.params, n, delta, cs.dist.mean()};
            rows.push_back({"hp_add", cs.q, cs.params, delta, n, hp_add_bound(qr)});
            rows.push_back({"exp_add", cs.q, cs.params, std::nullopt, n, exp_add_bound(qr)});
            if (is_infinite_beta(cs.params.beta) || cs.params.tau) {
                rows.push_back({"hp_mult", cs.q, cs.params, delta, n, hp_mult_bound(qr)});
                rows.push_back({"exp_mult", cs.q, cs.params, std::nullopt, n, exp_mult_bound(qr)});
            }
            const auto lb = lower_bounds(qr);
            rows.push_back({"lower_add", cs.q, cs.params, std::nullopt, n, lb.additive});
            rows.push_back({"lower_add_expectation", cs.q, cs.params, std::nullopt, n, lb.additive_expectation});
        }
    }
    return rows;
}

int cmd_bounds(const RunConfig& cfg) {
    const auto check = run_bound_check(cfg.bound_check);
    const fs::path dir = cfg.out_dir;
    emit(dir / "bounds.csv", bounds_table(formula_rows(cfg)).str());
    emit(dir / "bound_check.csv", bound_check_table(check).str());
    int violations = 0;
    for (const auto& r : check) {
        if (r.hp_violation || r.exp_violation) {
            ++violations;
            std::cerr << "violation: " << r.label << " q=" << format_double(r.q) << " n=" << r.n
                      << (r.hp_violation ? " hp_add" : "") << (r.exp_violation ? " exp_add" : "") << "\n";
        }
        if (r.skipped) std::cerr << "skipped: " << r.label << ": " << r.note << "\n";
    }
    return violations ? 3 : 0;
}

int cmd_adversary(const RunConfig& cfg) {
    const auto& ac = cfg.adversary;
    std::vector<AdversaryRow> rows;
    for (const auto& kind : ac.constructions) {
        for (double q : ac.q_values) {
            for (auto n : ac.n_grid) {
                std::vector<HardPair> pairs;
                if (kind == "additive") {
                    for (double b : ac.betas) pairs.push_back(hard_pair_additive(q, b, ac.gamma, n));
                } else if (kind == "multiplicative") {
                    for (double b : ac.betas) {
                        pairs.push_back(hard_pair_multiplicative(q, b, ac.gamma, ac.zeta, ac.tau, n));
                    }
                } else if (kind == "continuous") {
                    pairs.push_back(hard_pair_continuous(q, ac.gamma, n));
                } else {
                    throw ValidationError("adversary: unknown construction '" + kind + "'");
                }
                for (const auto& p : pairs) {
                    const auto outcome =
                        adversary_experiment(saa_algorithm(q), p, n, cfg.sweep.reps, cfg.sweep.master_seed);
                    const double h2 = hellinger_squared(p);
                    rows.push_back({p, outcome, h2, tv_upper_bound(h2, n)});
                }
            }
        }
    }
    emit(fs::path(cfg.out_dir) / "adversary.csv", adversary_table(rows).str());
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    std::vector<VerifyRow> rows;
    for (const auto& cs : cfg.clustered) {
        const NewsvendorInstance inst(cs.q, cs.dist);
        const auto rep = verify_clustered(inst, cs.params, cfg.verify_grid);
        const double mb = min_beta_proxy(inst, cs.params.gamma, cs.params.zeta, cfg.verify_grid);
        rows.push_back({cs.label, cs.q, cs.params, rep, mb});
    }
    emit(fs::path(cfg.out_dir) / "verify.csv", verify_table(rows).str());
    return 0;
}

int cmd_minpdf(const RunConfig& cfg) {
    const auto t = run_minpdf_counterexample(cfg.sweep.n_grid, cfg.sweep.reps, cfg.sweep.master_seed, 0.5, 1.0,
                                             cfg.sweep.threads);
    const fs::path dir = cfg.out_dir;
    if (cfg.format == "csv") {
        emit(dir / "minpdf_regret.csv", sweep_table(t.regret).str());
        emit(dir / "minpdf_density.csv", min_pdf_table(t.min_pdf).str());
        emit(dir / "minpdf_delta.csv", delta_table(t.delta).str());
    } else {
        emit_charts(dir, "minpdf_regret", sweep_charts(t.regret, false));
        emit_charts(dir, "minpdf_delta", delta_charts(t.delta));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven newsvendor: SAA regret sweeps, bounds and hard instances"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output directory");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--reps", o.reps, "repetitions per cell");
    app.add_option("--format", o.format, "csv or svg");
    app.add_option("--percentile", o.percentile, "percentile in (0,1)");
    app.add_option("--threads", o.threads, "worker threads (0 = all cores)");

    int (*handler)(const RunConfig&) = nullptr;
    const auto sub = [&](const char* name, const char* help, int (*fn)(const RunConfig&)) {
        app.add_subcommand(name, help)->callback([&handler, fn] { handler = fn; });
    };
    sub("sweep", "Monte-Carlo SAA regret over the n grid", cmd_sweep);
    sub("delta", "quantile spread Delta(eps) per distribution", cmd_delta);
    sub("bounds", "bound formulas and empirical validity check", cmd_bounds);
    sub("adversary", "SAA on the lower-bound hard pairs", cmd_adversary);
    sub("verify", "clustering check and minimal beta", cmd_verify);
    sub("minpdf", "V-shaped density against Uniform(0,1)", cmd_minpdf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return handler(resolve(o));
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
