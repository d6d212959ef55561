#pragma once

#include "dnv/binomial.hpp"
#include "dnv/clustered.hpp"
#include "dnv/errors.hpp"
#include "dnv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace dnv {

struct BoundQuery {
    double q = 0.5;
    ClusterParams params;
    std::int64_t n = 1;
    std::optional<double> delta;
    std::optional<double> mean_cap;
};

struct BoundResult {
    double value = 0.0;
    std::int64_t min_n = 1;
    bool applicable = true;
    double scale = 1.0;  ///< factor applied for a mean cap above 1
    std::string note;
};

namespace detail {

inline void check_query(const BoundQuery& qr) {
    if (!(qr.q > 0.0 && qr.q < 1.0)) throw ValidationError("bound: q must lie in (0,1)");
    if (qr.n < 1) throw ValidationError("bound: n must be >= 1");
    if (qr.delta && !(*qr.delta > 0.0 && *qr.delta < 1.0)) {
        throw ValidationError("bound: delta must lie in (0,1)");
    }
    if (qr.mean_cap && !(*qr.mean_cap > 0.0)) throw ValidationError("bound: mean_cap must be positive");
}

inline double require_delta(const BoundQuery& qr, const char* who) {
    if (!qr.delta) throw ValidationError(std::string(who) + ": delta is required");
    return *qr.delta;
}

inline double require_tau(const BoundQuery& qr, const char* who) {
    if (!qr.params.tau) throw ValidationError(std::string(who) + ": tau is required for finite beta");
    return *qr.params.tau;
}

/// Smallest integer n with n > t.
inline std::int64_t strict_min_n(double t) {
    if (!(t < 9e18)) return std::numeric_limits<std::int64_t>::max();
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(t)) + 1);
}

/// Smallest integer n with n >= t.
inline std::int64_t weak_min_n(double t) {
    if (!(t < 9e18)) return std::numeric_limits<std::int64_t>::max();
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t)));
}

inline double mean_scale(const BoundQuery& qr) { return std::max(1.0, qr.mean_cap.value_or(1.0)); }

inline const double kInvSqrtE = 1.0 / std::sqrt(std::numbers::e);

}  // namespace detail

/// High-probability additive regret bound.
inline BoundResult hp_add_bound(const BoundQuery& qr) {
    detail::check_query(qr);
    const double delta = detail::require_delta(qr, "hp_add_bound");
    const auto& p = qr.params;
    const double n = static_cast<double>(qr.n);
    const double l = std::log(2.0 / delta);
    BoundResult r;
    if (is_infinite_beta(p.beta)) {
        r.scale = detail::mean_scale(qr);
        if (!qr.mean_cap) r.note = "assumes mean <= 1";
        r.value = r.scale * 2.0 / (1.0 - qr.q) * std::sqrt(l / (2.0 * n));
        r.min_n = detail::weak_min_n(2.0 * l / ((1.0 - qr.q) * (1.0 - qr.q)));
    } else {
        validate_cluster_params(qr.q, p);
        r.value = std::pow(l / (2.0 * n), 0.5 * regret_order(p.beta)) / p.gamma;
        r.min_n = detail::strict_min_n(l / (2.0 * std::pow(p.gamma * p.zeta, 2.0 * p.beta + 2.0)));
    }
    r.applicable = qr.n >= r.min_n;
    return r;
}

/// High-probability multiplicative regret bound.
inline BoundResult hp_mult_bound(const BoundQuery& qr) {
    detail::check_query(qr);
    const double delta = detail::require_delta(qr, "hp_mult_bound");
    const auto& p = qr.params;
    const double n = static_cast<double>(qr.n);
    const double l = std::log(2.0 / delta);
    const double m = std::min(qr.q, 1.0 - qr.q);
    BoundResult r;
    if (is_infinite_beta(p.beta)) {
        const double denom = m * std::sqrt(2.0 * n / l) - 1.0;
        r.value = denom > 0.0 ? 2.0 / denom : kInf;
        r.min_n = detail::strict_min_n(l / (2.0 * m * m));
    } else {
        const double tau = detail::require_tau(qr, "hp_mult_bound");
        validate_cluster_params(qr.q, p);
        r.value = std::pow(l / (2.0 * n), 0.5 * regret_order(p.beta)) / (p.gamma * p.zeta * tau);
        r.min_n = detail::strict_min_n(l / (2.0 * std::pow(p.gamma * p.zeta, 2.0 * p.beta + 2.0)));
    }
    r.applicable = qr.n >= r.min_n;
    return r;
}

/// Sample size at which the beta = inf multiplicative bound reaches eps.
inline double hp_mult_sample_size(double q, double eps, double delta) {
    if (!(eps > 0.0)) throw ValidationError("hp_mult_sample_size: eps must be positive");
    const double m = std::min(q, 1.0 - q);
    return (2.0 + eps) * (2.0 + eps) / (eps * eps) * std::log(2.0 / delta) / (2.0 * m * m);
}

/// Expected additive regret bound. Requires a declared mean cap; for a cap
/// mu > 1 the bound of the demand rescaled by 1/mu is multiplied back by mu.
inline BoundResult exp_add_bound(const BoundQuery& qr) {
    detail::check_query(qr);
    if (!qr.mean_cap) throw ValidationError("exp_add_bound: a mean cap must be declared");
    const auto& p = qr.params;
    const double n = static_cast<double>(qr.n);
    const double mu = detail::mean_scale(qr);
    BoundResult r;
    r.scale = mu;
    r.min_n = 1;
    if (is_infinite_beta(p.beta)) {
        r.value = mu * (detail::kInvSqrtE + 2.0) / ((1.0 - qr.q) * std::sqrt(n));
    } else {
        validate_cluster_params(qr.q, p);
        const double g = p.gamma * mu;
        const double z = p.zeta / mu;
        const double lead = 2.0 / g * (1.0 / (p.beta + 1.0) + detail::kInvSqrtE) *
                            std::pow(1.0 / (2.0 * std::sqrt(n)), regret_order(p.beta));
        const double tail = (qr.q + 1.0) / (n * std::pow(g * z, p.beta + 1.0));
        r.value = mu * (lead + tail);
    }
    r.applicable = true;
    return r;
}

struct WorstCase {
    double value = 0.0;
    double witness_F = 0.0;  ///< CDF level of the maximizing two-point law at 0
    int branch = 0;          ///< 0: F in (0,q), 1: F in [q,1)
};

namespace detail {

inline double worst_ratio(double q, std::int64_t n, std::int64_t k, double f, int& branch) {
    const auto t = binomial_tails(n, f, k);
    if (f < q) {
        branch = 0;
        return (q - f) / (1.0 - q) * (t.at_or_above / f);
    }
    branch = 1;
    return (f - q) / q * (t.below / (1.0 - f));
}

}  // namespace detail

/// Grid maximum of the two worst-case expected multiplicative regret ratios
/// over two-point laws. The candidate set for grid g contains j/g, q 2^-j and
/// 1 - (1-q) 2^-j; it grows with g, so refining never lowers the result.
inline WorstCase exp_mult_exact_worstcase(double q, std::int64_t n, std::int64_t grid) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("exp_mult_exact_worstcase: q must lie in (0,1)");
    if (n < 1) throw ValidationError("exp_mult_exact_worstcase: n must be >= 1");
    if (grid < 100) throw ValidationError("exp_mult_exact_worstcase: grid must be >= 100");
    const std::int64_t k = min_count(n, q);
    WorstCase best;
    const auto consider = [&](double f) {
        if (!(f > 0.0 && f < 1.0)) return;
        int br = 0;
        const double v = detail::worst_ratio(q, n, k, f, br);
        if (v > best.value) best = {v, f, br};
    };
    for (std::int64_t j = 1; j < grid; ++j) {
        consider(static_cast<double>(j) / static_cast<double>(grid));
    }
    const std::int64_t geo = std::min<std::int64_t>(grid, 1000);
    for (std::int64_t j = 1; j <= geo; ++j) {
        const double s = std::ldexp(1.0, static_cast<int>(-j));
        consider(q * s);
        consider(1.0 - (1.0 - q) * s);
    }
    consider(q);
    return best;
}

/// Doubles the grid from 128 until successive maxima differ by < tol.
inline WorstCase exp_mult_worstcase_converged(double q, std::int64_t n, double tol = 1e-6,
                                              std::int64_t max_grid = 1 << 20) {
    std::int64_t g = 128;
    WorstCase prev = exp_mult_exact_worstcase(q, n, g);
    while (g < max_grid) {
        g *= 2;
        WorstCase cur = exp_mult_exact_worstcase(q, n, g);
        const bool done = cur.value - prev.value < tol;
        prev = cur;
        if (done) break;
    }
    return prev;
}

/// Expected multiplicative regret bound.
inline BoundResult exp_mult_bound(const BoundQuery& qr) {
    detail::check_query(qr);
    const auto& p = qr.params;
    const double n = static_cast<double>(qr.n);
    BoundResult r;
    r.min_n = 1;
    if (is_infinite_beta(p.beta)) {
        const auto w = exp_mult_worstcase_converged(qr.q, qr.n);
        r.value = w.value;
        r.note = "worst case over two-point laws at F=" + detail::fmt(w.witness_F);
    } else {
        const double tau = detail::require_tau(qr, "exp_mult_bound");
        validate_cluster_params(qr.q, p);
        const double m = std::min(qr.q, 1.0 - qr.q);
        const double first = 1.0 / (n * std::pow(p.gamma * p.zeta, p.beta + 1.0) * m);
        const double second = 2.0 / (p.gamma * p.zeta * tau) *
                              (1.0 / (p.beta + 1.0) + detail::kInvSqrtE) *
                              std::pow(1.0 / (2.0 * std::sqrt(n)), regret_order(p.beta));
        r.value = std::max(first, second);
    }
    r.applicable = true;
    return r;
}

struct LowerBounds {
    BoundResult additive;
    BoundResult additive_expectation;
    std::optional<BoundResult> multiplicative;
    std::optional<BoundResult> multiplicative_expectation;
    BoundResult continuous;
    BoundResult continuous_expectation;
};

/// Regret lower bounds that hold with probability 1/3 for any algorithm, and
/// their expectation versions.
inline LowerBounds lower_bounds(const BoundQuery& qr) {
    detail::check_query(qr);
    const auto& p = qr.params;
    const double q = qr.q;
    const double n = static_cast<double>(qr.n);
    if (!(p.beta >= 0.0) || !(p.gamma > 0.0) || std::isinf(p.gamma)) {
        throw ValidationError("lower_bounds: need beta in [0,inf] and gamma in (0,inf)");
    }
    if (!(p.zeta > 0.0) || p.zeta > zeta_cap(q, p.beta, p.gamma) * (1.0 + 1e-12)) {
        throw ValidationError("lower_bounds: zeta outside (0, cap]");
    }
    const double order = regret_order(p.beta);
    const double gmax = std::max(p.gamma, 1.0);
    LowerBounds out;
    out.additive.value = std::pow(q * (1.0 - q) / (3.0 * std::sqrt(n)), order) / (8.0 * gmax);
    out.additive_expectation.value = out.additive.value / 3.0;
    out.continuous.value = q * q * (1.0 - q) * (1.0 - q) / (72.0 * gmax * n);
    out.continuous_expectation.value = out.continuous.value / 3.0;
    if (p.tau) {
        const double tau = *p.tau;
        const double m = std::min(q, 1.0 - q);
        if (p.zeta >= zeta_cap(q, p.beta, p.gamma)) {
            throw ValidationError("lower_bounds: multiplicative bound needs zeta strictly below cap");
        }
        if (!(tau >= 0.0) || tau > m - edge_gap(p) + 1e-12) {
            throw ValidationError("lower_bounds: tau outside [0, min{q,1-q} - (gamma zeta)^(beta+1)]");
        }
        BoundResult mult;
        mult.value = std::pow((q - tau) * (1.0 - q - tau) / (3.0 * std::sqrt(n)), order) /
                     (16.0 * p.gamma * p.zeta * tau + 8.0 * q * (1.0 - q));
        BoundResult mult_e = mult;
        mult_e.value = mult.value / 3.0;
        out.multiplicative = mult;
        out.multiplicative_expectation = mult_e;
    }
    return out;
}

}  // namespace dnv
