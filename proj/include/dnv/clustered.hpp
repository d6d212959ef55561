#pragma once

#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/newsvendor.hpp"
#include "dnv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dnv {

/// (beta, gamma, zeta) with optional tau; beta may be kInf.
struct ClusterParams {
    double beta = 0.0;
    double gamma = 1.0;
    double zeta = 0.5;
    std::optional<double> tau;
};

struct ClusterReport {
    bool holds = true;
    double worst_point = 0.0;
    double worst_ratio = 0.0;
    std::size_t grid_size = 0;
};

/// Largest zeta for which any (beta, gamma, zeta)-clustered distribution
/// exists: (min{q,1-q})^(1/(beta+1)) / gamma.
inline double zeta_cap(double q, double beta, double gamma) {
    return root_order(std::min(q, 1.0 - q), beta) / gamma;
}

/// (gamma zeta)^(beta+1), the CDF gap forced at a* +/- zeta.
inline double edge_gap(const ClusterParams& p) { return pow_order(p.gamma * p.zeta, p.beta); }

inline void validate_cluster_params(double q, const ClusterParams& p) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("cluster params: q must lie in (0,1)");
    if (!(p.beta >= 0.0)) throw ValidationError("cluster params: beta must be in [0, inf]");
    if (!(p.gamma > 0.0) || std::isinf(p.gamma)) {
        throw ValidationError("cluster params: gamma must be positive and finite");
    }
    if (!(p.zeta > 0.0) || std::isinf(p.zeta)) {
        throw ValidationError("cluster params: zeta must be positive and finite");
    }
    const double cap = zeta_cap(q, p.beta, p.gamma);
    if (p.zeta > cap * (1.0 + 1e-12)) {
        throw ValidationError("cluster params: zeta=" + detail::fmt(p.zeta) +
                              " exceeds the feasibility cap " + detail::fmt(cap));
    }
    if (p.tau) {
        const double t = *p.tau;
        const double top = std::min(q, 1.0 - q) - edge_gap(p);
        if (!(t > 0.0) || t > top + 1e-12) {
            throw ValidationError("cluster params: tau=" + detail::fmt(t) + " outside (0, " +
                                  detail::fmt(top) + "]");
        }
    }
}

namespace detail {

/// gamma |a - a*| / |v - q|^(1/(beta+1)); values <= 1 satisfy the condition.
inline double cluster_ratio(double a, double v, double a_star, double q, const ClusterParams& p) {
    const double x = p.gamma * std::fabs(a - a_star);
    if (x == 0.0) return 0.0;
    if (is_infinite_beta(p.beta)) return x;
    // absorb the rounding of F(a) and of the subtraction
    const double y = std::fabs(v - q) + 4.0 * std::numeric_limits<double>::epsilon() * std::max(q, v);
    return x / std::pow(y, 1.0 / (p.beta + 1.0));
}

}  // namespace detail

/// Checks |a - a*| <= (1/gamma) |F(a) - q|^(1/(beta+1)) on [a* - zeta, a* + zeta].
/// Every grid point, kink and end point is tested with F and its left limit.
/// For piecewise-linear CDFs the candidate set also includes the points where
/// F crosses q; the ratio is quasiconvex between consecutive candidates, so
/// the check is exact there.
inline ClusterReport verify_clustered(const NewsvendorInstance& inst, const ClusterParams& params,
                                      std::size_t grid_size) {
    if (grid_size < 3) throw ValidationError("verify_clustered: grid_size must be >= 3");
    const double q = inst.q();
    validate_cluster_params(q, params);
    const auto& d = inst.dist();
    const double a_star = optimal_action(inst);
    const double lo = a_star - params.zeta;
    const double hi = a_star + params.zeta;

    std::vector<double> pts;
    pts.reserve(grid_size + 16);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        pts.push_back(i + 1 == grid_size ? hi : lo + t * (hi - lo));
    }
    pts.push_back(a_star);
    for (double k : d.kinks()) {
        if (k >= lo && k <= hi) pts.push_back(k);
    }
    // a piece on which F is exactly q, away from a*, violates every beta
    std::optional<double> flat_at_q;
    if (auto bps = d.breakpoints()) {
        for (std::size_t i = 0; i + 1 < bps->size(); ++i) {
            const auto& b0 = (*bps)[i];
            const auto& b1 = (*bps)[i + 1];
            if (b0.right == q && b1.left == q && b1.z > a_star && b0.z < hi) {
                flat_at_q = std::min(b1.z, hi);
            }
            if (b0.right != b1.left && (b0.right - q) * (b1.left - q) <= 0.0) {
                const double z = b0.z + (q - b0.right) / (b1.left - b0.right) * (b1.z - b0.z);
                if (z >= lo && z <= hi) pts.push_back(z);
            }
        }
    }

    ClusterReport rep;
    rep.grid_size = grid_size;
    rep.worst_point = a_star;
    rep.worst_ratio = 0.0;
    const auto consider = [&](double a, double v) {
        const double r = detail::cluster_ratio(a, v, a_star, q, params);
        if (r > rep.worst_ratio) {
            rep.worst_ratio = r;
            rep.worst_point = a;
        }
    };
    for (double a : pts) {
        consider(a, d.cdf(a));
        if (a > lo) consider(a, d.cdf_left(a));
    }
    if (flat_at_q && *flat_at_q > a_star) {
        rep.worst_ratio = kInf;
        rep.worst_point = *flat_at_q;
    }
    rep.holds = rep.worst_ratio <= 1.0 + 1e-12;
    return rep;
}

/// F(a* - zeta) >= tau and F(a* + zeta) <= 1 - tau.
inline bool check_tau(const NewsvendorInstance& inst, const ClusterParams& params) {
    if (!params.tau) throw ValidationError("check_tau: tau is not set");
    const double tau = *params.tau;
    const double a_star = optimal_action(inst);
    const auto& d = inst.dist();
    constexpr double slack = 1e-12;
    return d.cdf(a_star - params.zeta) >= tau - slack &&
           d.cdf(a_star + params.zeta) <= 1.0 - tau + slack;
}

/// max{F^-1(min{q+eps,1}) - a*, a* - F^-1(max{q-eps,0})}, with F^-1(0)
/// read as the lower end of the support.
inline double delta_epsilon(const NewsvendorInstance& inst, double eps) {
    if (!(eps > 0.0)) throw DomainError("delta_epsilon: eps must be positive");
    const auto& d = inst.dist();
    const double q = inst.q();
    const double a_star = optimal_action(inst);
    const double up = d.quantile(std::min(q + eps, 1.0));
    const double down_level = q - eps;
    const double down = down_level > 0.0 ? d.quantile(down_level) : d.support().first;
    return std::max({up - a_star, a_star - down, 0.0});
}

/// Smallest beta (to within `resolution`) for which the instance is
/// (beta, gamma, zeta)-clustered. Returns kInf when no beta <= 1000 works;
/// the reason goes to `diagnostic` when given.
inline double min_beta_proxy(const NewsvendorInstance& inst, double gamma, double zeta,
                             std::size_t grid_size, std::string* diagnostic = nullptr,
                             double resolution = 1e-4) {
    constexpr double ceiling = 1000.0;
    const auto note = [&](const std::string& s) {
        if (diagnostic) *diagnostic = s;
    };
    note("");
    const double m = std::min(inst.q(), 1.0 - inst.q());
    const double gz = gamma * zeta;
    if (!(gamma > 0.0) || !(zeta > 0.0)) {
        note("gamma and zeta must be positive");
        return kInf;
    }
    if (gz >= 1.0) {
        note("gamma*zeta >= 1: no finite beta is feasible");
        return kInf;
    }
    double lo = std::max(0.0, std::log(m) / std::log(gz) - 1.0);
    // feasibility is tested with a relative slack; step just inside it
    while (pow_order(gz, lo) > m) lo = std::nextafter(lo, kInf);
    if (lo > ceiling) {
        note("feasible beta exceeds the search ceiling");
        return kInf;
    }
    const auto holds = [&](double b) {
        return verify_clustered(inst, ClusterParams{b, gamma, zeta, std::nullopt}, grid_size).holds;
    };
    if (holds(lo)) return lo;
    double hi = ceiling;
    if (!holds(hi)) {
        note("not clustered for any beta <= 1000");
        return kInf;
    }
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Largest gamma (up to the feasibility cap) for which the instance is
/// (beta, gamma, zeta)-clustered on the verification grid. The ratio is
/// linear in gamma, so one pass at a reference gamma suffices.
inline double fit_gamma(const NewsvendorInstance& inst, double beta, double zeta, std::size_t grid_size) {
    if (!(zeta > 0.0) || std::isinf(zeta)) throw ValidationError("fit_gamma: zeta must be positive and finite");
    const double top = root_order(std::min(inst.q(), 1.0 - inst.q()), beta) / zeta;
    const double ref = 0.5 * top;
    const auto rep = verify_clustered(inst, ClusterParams{beta, ref, zeta, std::nullopt}, grid_size);
    if (rep.worst_ratio <= 0.0) return top;
    return std::min(top, ref / rep.worst_ratio * (1.0 - 1e-9));
}

/// CDF q +/- (gamma |z - a*|)^(beta+1) on [a* - zeta, a* + zeta] with the
/// remaining mass placed as atoms at both ends. Clustered with equality.
inline Distribution equality_clustered(double q, double a_star, const ClusterParams& params) {
    validate_cluster_params(q, params);
    if (is_infinite_beta(params.beta)) {
        throw ValidationError("equality_clustered: beta must be finite");
    }
    if (a_star < params.zeta) {
        throw ValidationError("equality_clustered: a_star must be >= zeta to keep support in [0,inf)");
    }
    const double m = edge_gap(params);
    if (m > std::min(q, 1.0 - q)) {
        throw ValidationError("equality_clustered: (gamma*zeta)^(beta+1) exceeds min{q,1-q}");
    }
    return Distribution(EqualityClustered{q, a_star, params.beta, params.gamma, params.zeta});
}

}  // namespace dnv
