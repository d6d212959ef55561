#pragma once

#include "dnv/adversary.hpp"
#include "dnv/clustered.hpp"
#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/harness/output.hpp"
#include "dnv/harness/sweep.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace dnv::harness {

using json = nlohmann::json;

struct AdversaryConfig {
    std::vector<std::string> constructions{"additive", "multiplicative", "continuous"};
    std::vector<double> q_values{0.5};
    std::vector<double> betas{0.0, 1.0};
    double gamma = 1.0;
    double zeta = 0.1;
    double tau = 0.2;
    std::vector<std::int64_t> n_grid{25, 100};
};

/// Everything a CLI run needs; sections mirror the JSON config file.
struct RunConfig {
    SweepConfig sweep;
    std::vector<double> eps_grid = default_eps_grid();
    std::vector<ClusteredCase> clustered;
    BoundCheckConfig bound_check;
    AdversaryConfig adversary;
    std::string out_dir = "out";
    std::string format = "csv";
    std::size_t verify_grid = 2001;
};

namespace detail {

inline double num(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
    if (j.contains(key)) {
        const auto& v = j.at(key);
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "infinity") return kInf;
            throw ValidationError(std::string("config: field '") + key + "' is not a number");
        }
        if (!v.is_number()) throw ValidationError(std::string("config: field '") + key + "' is not a number");
        return v.get<double>();
    }
    if (fallback) return *fallback;
    throw ValidationError(std::string("config: missing field '") + key + "'");
}

template <class T>
std::vector<T> list(const json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array()) throw ValidationError(std::string("config: field '") + key + "' must be a list");
    std::vector<T> out;
    for (const auto& e : v) out.push_back(e.get<T>());
    return out;
}

/// n grid as an explicit list or as {"start", "stop", "step"}; when start is
/// 1 and step divides stop, the step sequence is anchored at 0 (1, s, 2s, ...).
inline std::vector<std::int64_t> n_grid(const json& j, std::vector<std::int64_t> fallback) {
    if (!j.contains("n")) return fallback;
    const auto& v = j.at("n");
    if (v.is_array()) return v.get<std::vector<std::int64_t>>();
    const auto start = v.value("start", std::int64_t{1});
    const auto stop = v.value("stop", std::int64_t{200});
    const auto step = v.value("step", std::int64_t{5});
    if (start < 1 || stop < start || step < 1) throw ValidationError("config: bad n range");
    std::vector<std::int64_t> out{start};
    for (std::int64_t n = (start / step + 1) * step; n <= stop; n += step) out.push_back(n);
    return out;
}

}  // namespace detail

inline ClusterParams parse_cluster_params(const json& j) {
    ClusterParams p;
    p.beta = detail::num(j, "beta");
    p.gamma = detail::num(j, "gamma");
    p.zeta = detail::num(j, "zeta");
    if (j.contains("tau")) p.tau = detail::num(j, "tau");
    return p;
}

/// Distribution literal: {"family": ..., parameters..., "scale": optional}.
inline Distribution parse_distribution(const json& j) {
    if (!j.is_object() || !j.contains("family")) {
        throw ValidationError("config: distribution needs a 'family' field");
    }
    const auto fam = j.at("family").get<std::string>();
    using detail::num;
    const auto build = [&]() -> Distribution {
        if (fam == "uniform") return make_uniform(num(j, "lo", 0.0), num(j, "hi", 1.0));
        if (fam == "exponential") {
            if (j.contains("mean")) return make_exponential_mean(num(j, "mean"));
            return make_exponential(num(j, "rate", 1.0));
        }
        if (fam == "pareto") return make_pareto(num(j, "shape"), num(j, "scale", 1.0));
        if (fam == "lognormal") return make_lognormal(num(j, "mu", 0.0), num(j, "sigma"));
        if (fam == "scaled_bernoulli" || fam == "bernoulli") {
            return make_scaled_bernoulli(num(j, "c", 1.0), num(j, "p"));
        }
        if (fam == "piecewise") {
            std::vector<Breakpoint> pts;
            for (const auto& b : j.at("breakpoints")) {
                if (!b.is_array() || b.size() != 3) {
                    throw ValidationError("config: piecewise breakpoints are [z, F_left, F_right]");
                }
                pts.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>()});
            }
            return piecewise_from_breakpoints(std::move(pts));
        }
        if (fam == "empirical") return empirical_from_samples(j.at("samples").get<std::vector<double>>());
        if (fam == "equality_clustered") {
            return equality_clustered(num(j, "q"), num(j, "a_star"), parse_cluster_params(j));
        }
        if (fam == "vshaped") return make_vshaped(num(j, "a", 0.5), num(j, "b", 1.0));
        throw ValidationError("config: unknown family '" + fam + "'");
    };
    Distribution d = build();
    if (j.contains("scale")) d = d.scaled(num(j, "scale"));
    return d;
}

/// Uniform(0,1), Exponential(mean 1), Pareto(2,1), Lognormal(0,1.5) and the
/// easy/hard scaled Bernoullis, each Bernoulli tied to its own q.
inline std::vector<LabeledDistribution> default_distributions() {
    return {
        {"uniform", make_uniform(0.0, 1.0), {}},
        {"exponential", make_exponential_mean(1.0), {}},
        {"pareto", make_pareto(2.0, 1.0), {}},
        {"lognormal", make_lognormal(0.0, 1.5), {}},
        {"easy_bernoulli_q0.4", make_scaled_bernoulli(1.0, 0.45), {0.4}},
        {"hard_bernoulli_q0.4", make_scaled_bernoulli(23.0, 0.59), {0.4}},
        {"easy_bernoulli_q0.9", make_scaled_bernoulli(1.0, 0.25), {0.9}},
        {"hard_bernoulli_q0.9", make_scaled_bernoulli(127.0, 0.11), {0.9}},
    };
}

/// Instances with mean <= 1 and verified clustering parameters, used to
/// check the upper bounds empirically.
inline std::vector<ClusteredCase> default_clustered_cases() {
    std::vector<ClusteredCase> out;
    for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const ClusterParams p{beta, 1.0, 0.5, std::nullopt};
        out.push_back({"equality_beta" + format_double(beta), equality_clustered(0.5, 0.5, p), 0.5, p});
    }
    {
        const ClusterParams p{1.0, 1.0, 0.5, std::nullopt};
        out.push_back({"equality_beta1_q0.3", equality_clustered(0.3, 0.5, p), 0.3, p});
    }
    out.push_back({"uniform_q0.4", make_uniform(0.0, 1.0), 0.4, {0.0, 1.0, 0.4, std::nullopt}});
    out.push_back({"uniform_q0.9", make_uniform(0.0, 1.0), 0.9, {0.0, 1.0, 0.1, std::nullopt}});
    out.push_back({"easy_bernoulli_q0.4", make_scaled_bernoulli(1.0, 0.45), 0.4, {kInf, 1.0, 1.0, std::nullopt}});
    out.push_back({"easy_bernoulli_q0.9", make_scaled_bernoulli(1.0, 0.25), 0.9, {kInf, 1.0, 1.0, std::nullopt}});
    for (double q : {0.4, 0.9}) {
        const auto d = make_exponential_mean(1.0);
        const NewsvendorInstance inst(q, d);
        const double zeta = 0.5 * std::min(q, 1.0 - q);
        const double gamma = fit_gamma(inst, 0.0, zeta, 2001);
        out.push_back({"exponential_q" + format_double(q), d, q, {0.0, gamma, zeta, std::nullopt}});
    }
    for (double beta : {0.0, 1.0}) {
        const auto hp = hard_pair_additive(0.5, beta, 1.0, 100);
        out.push_back({"hard_pair_P_beta" + format_double(beta), hp.P, 0.5, hp.params});
        out.push_back({"hard_pair_Q_beta" + format_double(beta), hp.Q, 0.5, hp.params});
    }
    return out;
}

inline RunConfig default_run_config() {
    RunConfig cfg;
    cfg.sweep.distributions = default_distributions();
    cfg.clustered = default_clustered_cases();
    cfg.bound_check.cases = cfg.clustered;
    return cfg;
}

/// Applies a parsed JSON document on top of the defaults.
inline RunConfig parse_run_config(const json& root) {
    RunConfig cfg = default_run_config();
    if (!root.is_object()) throw ValidationError("config: top level must be an object");
    std::vector<LabeledDistribution> labeled;
    if (root.contains("distributions")) {
        for (const auto& e : root.at("distributions")) {
            const auto label = e.value("label", std::string(e.value("family", std::string("dist"))));
            labeled.push_back({label, parse_distribution(e), detail::list<double>(e, "q_values", {})});
        }
        cfg.sweep.distributions = labeled;
    }
    if (root.contains("grids")) {
        const auto& g = root.at("grids");
        cfg.sweep.q_values = detail::list<double>(g, "q", cfg.sweep.q_values);
        cfg.sweep.n_grid = detail::n_grid(g, cfg.sweep.n_grid);
        cfg.eps_grid = detail::list<double>(g, "eps", cfg.eps_grid);
        cfg.sweep.reps = g.value("reps", cfg.sweep.reps);
        cfg.sweep.percentile = detail::num(g, "percentile", cfg.sweep.percentile);
        cfg.sweep.mean_cap = detail::num(g, "mean_cap", cfg.sweep.mean_cap);
        cfg.bound_check.n_grid = detail::list<std::int64_t>(g, "bound_n", cfg.bound_check.n_grid);
        cfg.bound_check.delta = detail::num(g, "delta", cfg.bound_check.delta);
        cfg.verify_grid = g.value("verify_grid", cfg.verify_grid);
    }
    if (root.contains("cluster_params")) {
        std::vector<ClusteredCase> cases;
        for (const auto& e : root.at("cluster_params")) {
            const auto label = e.at("label").get<std::string>();
            const double q = detail::num(e, "q");
            const ClusterParams p = parse_cluster_params(e);
            if (e.contains("distribution")) {
                cases.push_back({label, parse_distribution(e.at("distribution")), q, p});
                continue;
            }
            const LabeledDistribution* found = nullptr;
            for (const auto& ld : cfg.sweep.distributions) {
                if (ld.label == label) found = &ld;
            }
            if (!found) throw ValidationError("config: cluster_params label '" + label + "' has no distribution");
            cases.push_back({label, found->dist, q, p});
        }
        cfg.clustered = cases;
        cfg.bound_check.cases = cases;
    }
    if (root.contains("adversary")) {
        const auto& a = root.at("adversary");
        auto& ac = cfg.adversary;
        ac.constructions = detail::list<std::string>(a, "constructions", ac.constructions);
        ac.q_values = detail::list<double>(a, "q", ac.q_values);
        ac.betas = detail::list<double>(a, "beta", ac.betas);
        ac.gamma = detail::num(a, "gamma", ac.gamma);
        ac.zeta = detail::num(a, "zeta", ac.zeta);
        ac.tau = detail::num(a, "tau", ac.tau);
        ac.n_grid = detail::list<std::int64_t>(a, "n", ac.n_grid);
    }
    if (root.contains("outputs")) {
        const auto& o = root.at("outputs");
        cfg.out_dir = o.value("dir", cfg.out_dir);
        cfg.format = o.value("format", cfg.format);
        cfg.sweep.exact = o.value("exact", cfg.sweep.exact);
        if (o.contains("seed")) cfg.sweep.master_seed = o.at("seed").get<std::uint64_t>();
    }
    cfg.bound_check.master_seed = cfg.sweep.master_seed;
    cfg.bound_check.reps = cfg.sweep.reps;
    cfg.bound_check.verify_grid = cfg.verify_grid;
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config: " + path);
    json root;
    try {
        f >> root;
    } catch (const json::exception& e) {
        throw ValidationError("config: " + path + ": " + e.what());
    }
    try {
        return parse_run_config(root);
    } catch (const json::exception& e) {
        throw ValidationError("config: " + path + ": " + e.what());
    }
}

}  // namespace dnv::harness
