#pragma once

#include "dnv/bounds.hpp"
#include "dnv/clustered.hpp"
#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/newsvendor.hpp"
#include "dnv/numeric.hpp"
#include "dnv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dnv {

enum class PairKind { additive, multiplicative, continuous };

inline const char* pair_kind_name(PairKind k) {
    switch (k) {
        case PairKind::additive: return "additive";
        case PairKind::multiplicative: return "multiplicative";
        case PairKind::continuous: return "continuous";
    }
    return "unknown";
}

/// Two nearly indistinguishable laws whose optimal actions are H apart.
struct HardPair {
    PairKind kind = PairKind::additive;
    Distribution P;
    Distribution Q;
    double a_star_P = 0.0;
    double a_star_Q = 0.0;
    double C = 0.0;
    double H = 0.0;
    std::optional<double> eta{};
    double regret_floor = 0.0;
    double split_point = 0.0;
    double q = 0.5;
    std::int64_t n = 1;
    ClusterParams params{};
};

namespace detail {

inline void check_q_n(double q, std::int64_t n, const char* who) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError(std::string(who) + ": q must lie in (0,1)");
    if (n < 1) throw ValidationError(std::string(who) + ": n must be >= 1");
}

}  // namespace detail

/// Atoms at 0 and H with a linear piece of slope C/(H sqrt n) between them;
/// Q is P shifted down by C/sqrt(n) on [0, H). zeta defaults to its cap.
inline HardPair hard_pair_additive(double q, double beta, double gamma, std::int64_t n,
                                   std::optional<double> zeta = std::nullopt) {
    detail::check_q_n(q, n, "hard_pair_additive");
    if (!(beta >= 0.0) || !(gamma > 0.0) || std::isinf(gamma)) {
        throw ValidationError("hard_pair_additive: need beta in [0,inf], gamma in (0,inf)");
    }
    const double sn = std::sqrt(static_cast<double>(n));
    const double C = q * (1.0 - q) / 3.0;
    const double H = root_order(C / sn, beta) / std::max(gamma, 1.0);
    const double gap = C / sn;
    HardPair hp{.kind = PairKind::additive,
                .P = piecewise_from_breakpoints({{0.0, 0.0, q}, {H, q + gap, 1.0}}),
                .Q = piecewise_from_breakpoints({{0.0, 0.0, q - gap}, {H, q, 1.0}}),
                .a_star_P = 0.0,
                .a_star_Q = H,
                .C = C,
                .H = H};
    hp.q = q;
    hp.n = n;
    hp.params = {beta, gamma, zeta.value_or(zeta_cap(q, beta, gamma)), std::nullopt};
    validate_cluster_params(q, hp.params);
    hp.split_point = 0.5 * H;
    hp.regret_floor = lower_bounds({q, hp.params, n, std::nullopt, std::nullopt}).additive.value;
    return hp;
}

/// Four-segment construction on [0, 4 zeta + H] with tau mass at 0 and at
/// 4 zeta + H; P and Q differ in the atoms at 2 zeta and 2 zeta + H.
inline HardPair hard_pair_multiplicative(double q, double beta, double gamma, double zeta, double tau,
                                         std::int64_t n) {
    detail::check_q_n(q, n, "hard_pair_multiplicative");
    if (!(beta >= 0.0) || !(gamma > 0.0) || std::isinf(gamma)) {
        throw ValidationError("hard_pair_multiplicative: need beta in [0,inf], gamma in (0,inf)");
    }
    const ClusterParams params{beta, gamma, zeta, tau};
    if (!(zeta > 0.0) || zeta >= zeta_cap(q, beta, gamma)) {
        throw ValidationError("hard_pair_multiplicative: zeta must lie strictly below its cap");
    }
    validate_cluster_params(q, params);
    const double sn = std::sqrt(static_cast<double>(n));
    const double C = (q - tau) * (1.0 - q - tau) / 3.0;
    const double H = root_order(C / sn, beta) / gamma;
    const double gap = C / sn;
    const double z1 = 2.0 * zeta;
    const double z2 = 2.0 * zeta + H;
    const double z3 = 4.0 * zeta + H;
    HardPair hp{.kind = PairKind::multiplicative,
                .P = piecewise_from_breakpoints(
                    {{0.0, 0.0, tau}, {z1, tau, q}, {z2, q + gap, 1.0 - tau}, {z3, 1.0 - tau, 1.0}}),
                .Q = piecewise_from_breakpoints(
                    {{0.0, 0.0, tau}, {z1, tau, q - gap}, {z2, q, 1.0 - tau}, {z3, 1.0 - tau, 1.0}}),
                .a_star_P = z1,
                .a_star_Q = z2,
                .C = C,
                .H = H};
    hp.q = q;
    hp.n = n;
    hp.params = params;
    hp.split_point = z1 + 0.5 * H;
    hp.regret_floor = lower_bounds({q, params, n, std::nullopt, std::nullopt}).multiplicative->value;
    return hp;
}

/// Continuous construction with density >= gamma on [0, H + 2 eta]. eta
/// defaults to the largest admissible value.
inline HardPair hard_pair_continuous(double q, double gamma, std::int64_t n,
                                     std::optional<double> eta = std::nullopt) {
    detail::check_q_n(q, n, "hard_pair_continuous");
    if (!(gamma > 0.0) || std::isinf(gamma)) {
        throw ValidationError("hard_pair_continuous: gamma must be positive and finite");
    }
    const double sn = std::sqrt(static_cast<double>(n));
    const double C = q * (1.0 - q) / 3.0;
    const double gap = C / sn;
    const double H = gap / std::max(gamma, 1.0);
    const double cap = std::min((std::min(q, 1.0 - q) - gap) / gamma, q / 3.0);
    const double e = eta.value_or(cap);
    if (!(e > 0.0) || e > cap * (1.0 + 1e-12)) {
        throw ValidationError("hard_pair_continuous: eta=" + detail::fmt(e) + " outside (0, " +
                              detail::fmt(cap) + "]");
    }
    HardPair hp{.kind = PairKind::continuous,
                .P = piecewise_from_breakpoints({{0.0, 0.0, 0.0},
                                            {e, q, q},
                                            {H + e, q + gap, q + gap},
                                            {H + 2.0 * e, 1.0, 1.0}}),
                .Q = piecewise_from_breakpoints({{0.0, 0.0, 0.0},
                                            {e, q - gap, q - gap},
                                            {H + e, q, q},
                                            {H + 2.0 * e, 1.0, 1.0}}),
                .a_star_P = e,
                .a_star_Q = H + e,
                .C = C,
                .H = H};
    hp.eta = e;
    hp.q = q;
    hp.n = n;
    hp.params = {0.0, gamma, e, std::nullopt};
    hp.split_point = e + 0.5 * H;
    hp.regret_floor = q * q * (1.0 - q) * (1.0 - q) / (72.0 * std::max(gamma, 1.0) * static_cast<double>(n));
    return hp;
}

/// Squared Hellinger distance, with the 1/2 convention, between two
/// piecewise-linear laws: atoms plus constant densities on the common
/// refinement of their breakpoints.
inline double hellinger_squared(const Distribution& P, const Distribution& Q) {
    const auto bp = P.breakpoints();
    const auto bq = Q.breakpoints();
    if (!bp || !bq) throw ValidationError("hellinger_squared: both laws must be piecewise linear");
    std::vector<double> zs;
    for (const auto& b : *bp) zs.push_back(b.z);
    for (const auto& b : *bq) zs.push_back(b.z);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    // (sqrt a - sqrt b)^2 without cancellation
    const auto sq = [](double a, double b) {
        a = std::max(a, 0.0);
        b = std::max(b, 0.0);
        const double s = std::sqrt(a) + std::sqrt(b);
        return s > 0.0 ? (a - b) * (a - b) / (s * s) : 0.0;
    };
    double total = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double z = zs[i];
        total += sq(P.cdf(z) - P.cdf_left(z), Q.cdf(z) - Q.cdf_left(z));
        if (i + 1 < zs.size()) {
            const double w = zs[i + 1] - z;
            const double fp = (P.cdf_left(zs[i + 1]) - P.cdf(z)) / w;
            const double fq = (Q.cdf_left(zs[i + 1]) - Q.cdf(z)) / w;
            total += w * sq(fp, fq);
        }
    }
    return 0.5 * total;
}

inline double hellinger_squared(const HardPair& pair) { return hellinger_squared(pair.P, pair.Q); }

/// The closed-form upper bound from the construction's Hellinger chain.
inline double hellinger_bound(const HardPair& pair) {
    const double n = static_cast<double>(pair.n);
    const double c2 = pair.C * pair.C;
    if (pair.kind == PairKind::multiplicative) {
        const double tau = *pair.params.tau;
        return 0.5 * (c2 / ((pair.q - tau) * n) + c2 / ((1.0 - pair.q - tau) * n));
    }
    return c2 / (2.0 * n * pair.q * (1.0 - pair.q));
}

/// TV(P^n, Q^n) <= sqrt(2 n H^2(P,Q)), capped at 1.
inline double tv_upper_bound(double h2, std::int64_t n) {
    if (!(h2 >= 0.0 && h2 <= 1.0)) throw DomainError("tv_upper_bound: h2 must lie in [0,1]");
    if (n < 1) throw DomainError("tv_upper_bound: n must be >= 1");
    return std::min(1.0, std::sqrt(2.0 * static_cast<double>(n) * h2));
}

using Algorithm = std::function<double(std::span<const double>)>;

inline Algorithm saa_algorithm(double q) {
    return [q](std::span<const double> s) { return saa_action(s, q); };
}

inline Algorithm constant_algorithm(double a) {
    return [a](std::span<const double>) { return a; };
}

struct AdversaryOutcome {
    double freq_P = 0.0;
    double freq_Q = 0.0;
    std::int64_t reps = 0;
    double threshold = 0.0;
};

/// Runs `algorithm` on n draws from each of P and Q, reps times, and reports
/// how often its regret reaches the pair's floor. Regret is multiplicative
/// for the multiplicative pair and additive otherwise.
inline AdversaryOutcome adversary_experiment(const Algorithm& algorithm, const HardPair& pair,
                                             std::int64_t n, std::int64_t reps, std::uint64_t seed) {
    if (reps < 1000) throw ValidationError("adversary_experiment: reps must be >= 1000");
    if (n < 1) throw ValidationError("adversary_experiment: n must be >= 1");
    AdversaryOutcome out;
    out.reps = reps;
    out.threshold = pair.regret_floor;
    const double cut = pair.regret_floor * (1.0 - 1e-12);
    const auto run = [&](const Distribution& d, std::uint64_t tag) {
        const NewsvendorInstance inst(pair.q, d);
        const double opt = expected_loss(inst, optimal_action(inst));
        std::vector<double> xs(static_cast<std::size_t>(n));
        std::int64_t hits = 0;
        for (std::int64_t r = 0; r < reps; ++r) {
            Engine eng(derive_seed(seed, {tag, static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(r)}));
            d.sample_into(eng, xs);
            const double a = std::max(0.0, algorithm(xs));
            double regret = additive_regret(inst, a);
            if (pair.kind == PairKind::multiplicative) regret /= opt;
            if (regret >= cut) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(reps);
    };
    out.freq_P = run(pair.P, hash_label("P"));
    out.freq_Q = run(pair.Q, hash_label("Q"));
    return out;
}

}  // namespace dnv
