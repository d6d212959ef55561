#pragma once

#include "dnv/binomial.hpp"
#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/numeric.hpp"
#include "dnv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace dnv {

/// Critical quantile q and the demand distribution.
class NewsvendorInstance {
public:
    NewsvendorInstance(double q, Distribution d) : q_(q), d_(std::move(d)) {
        if (!(q > 0.0 && q < 1.0)) {
            throw ValidationError("newsvendor: q must lie in (0,1), got " + detail::fmt(q));
        }
        if (!std::isfinite(d_.mean())) throw ValidationError("newsvendor: distribution mean is infinite");
    }

    double q() const { return q_; }
    const Distribution& dist() const { return d_; }

private:
    double q_;
    Distribution d_;
};

struct RegretValue {
    double additive = 0.0;
    double multiplicative = 0.0;
    bool multiplicative_defined = true;
    double optimal_loss = 0.0;
};

/// L(a) = (1-q) int_0^a F + q int_a^inf (1-F).
inline double expected_loss(const NewsvendorInstance& inst, double a) {
    if (!(a >= 0.0)) throw DomainError("expected_loss: action must be >= 0, got " + detail::fmt(a));
    const auto& d = inst.dist();
    const double q = inst.q();
    const double i = d.cdf_integral(a);
    const double upper = d.mean() - a + i;  // int_a^inf (1-F)
    return (1.0 - q) * i + q * std::max(upper, 0.0);
}

inline double optimal_action(const NewsvendorInstance& inst) { return inst.dist().quantile(inst.q()); }

/// The ceil(nq)-th order statistic, i.e. inf{a : F_hat(a) >= q}.
inline double saa_action(std::span<const double> samples, double q) {
    if (samples.empty()) throw ValidationError("saa_action: no samples");
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("saa_action: q must lie in (0,1)");
    std::vector<double> v(samples.begin(), samples.end());
    const auto k = min_count(static_cast<std::int64_t>(v.size()), q);
    const auto idx = static_cast<std::size_t>(k - 1);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

/// L(a) - L(a*) = int_a^{a*} (q - F(z)) dz, evaluated through the closed-form
/// antiderivative of F.
inline double additive_regret(const NewsvendorInstance& inst, double a) {
    if (!(a >= 0.0)) throw DomainError("additive_regret: action must be >= 0, got " + detail::fmt(a));
    const auto& d = inst.dist();
    const double a_star = optimal_action(inst);
    const double r = inst.q() * (a_star - a) - (d.cdf_integral(a_star) - d.cdf_integral(a));
    return std::max(r, 0.0);
}

/// additive_regret with a* and its antiderivative value cached, for loops
/// that score many actions against one instance.
class RegretEvaluator {
public:
    explicit RegretEvaluator(const NewsvendorInstance& inst)
        : inst_(&inst), a_star_(optimal_action(inst)), i_star_(inst.dist().cdf_integral(a_star_)) {}

    double a_star() const { return a_star_; }
    double operator()(double a) const {
        const double r = inst_->q() * (a_star_ - a) - (i_star_ - inst_->dist().cdf_integral(a));
        return std::max(r, 0.0);
    }

private:
    const NewsvendorInstance* inst_;
    double a_star_;
    double i_star_;
};

inline RegretValue multiplicative_regret(const NewsvendorInstance& inst, double a) {
    RegretValue out;
    out.additive = additive_regret(inst, a);
    double opt = expected_loss(inst, optimal_action(inst));
    const double scale = inst.q() * inst.dist().mean();
    if (opt <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0)) opt = 0.0;
    out.optimal_loss = opt;
    if (opt > 0.0) {
        out.multiplicative = out.additive / opt;
    } else {
        out.multiplicative = std::numeric_limits<double>::quiet_NaN();
        out.multiplicative_defined = false;
    }
    return out;
}

namespace detail {

/// Integrand of the expected regret as a function of u = F(z).
struct RegretWeight {
    std::int64_t n;
    std::int64_t k;
    double q;

    double operator()(double u) const {
        if (u < q) return (q - u) * binomial_tails(n, u, k).at_or_above;
        return (u - q) * binomial_tails(n, u, k).below;
    }
};

/// Split points around q where the binomial factor changes quickly.
inline std::vector<double> concentration_levels(double q, std::int64_t n) {
    const double s = std::sqrt(q * (1.0 - q) / static_cast<double>(n));
    std::vector<double> out{q};
    for (double c : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        out.push_back(q - c * s);
        out.push_back(q + c * s);
    }
    return out;
}

}  // namespace detail

/// E[L(a_hat)] - L(a*) for SAA with n samples:
///   int_0^{a*} (q-F) Pr[F_hat >= q] dz + int_{a*}^inf (F-q) Pr[F_hat < q] dz.
/// Piecewise-linear CDFs are integrated in u = F(z) segment by segment, which
/// is exact on flat pieces; smooth families are integrated in z.
inline double exact_expected_regret(const NewsvendorInstance& inst, std::int64_t n) {
    if (n < 1) throw ValidationError("exact_expected_regret: n must be >= 1");
    const double q = inst.q();
    const auto& d = inst.dist();
    const detail::RegretWeight h{n, min_count(n, q), q};
    const auto levels = detail::concentration_levels(q, n);
    constexpr double tol = 1e-11;
    constexpr double kAbsFraction = 1e-13;  // of the rough total, per piece

    if (auto pts = d.breakpoints()) {
        struct Segment {
            double u0, u1, dz;
            std::vector<double> cuts;
        };
        std::vector<Segment> segs;
        double flat = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i + 1 < pts->size(); ++i) {
            const double u0 = (*pts)[i].right;
            const double u1 = (*pts)[i + 1].left;
            const double dz = (*pts)[i + 1].z - (*pts)[i].z;
            if (u1 <= u0) {
                flat += h(u0) * dz;
                continue;
            }
            Segment s{u0, u1, dz, {u0, u1}};
            for (double v : levels) {
                if (v > u0 && v < u1) s.cuts.push_back(v);
            }
            scale += rough_l1(h, s.cuts) * dz / (u1 - u0);
            segs.push_back(std::move(s));
        }
        scale += std::fabs(flat);
        double total = flat;
        for (const auto& s : segs) {
            const double jac = s.dz / (s.u1 - s.u0);
            total += integrate_pieces(h, s.cuts, tol, kAbsFraction * scale / jac).value * jac;
        }
        return std::max(total, 0.0);
    }

    const auto [lo, hi] = d.support();
    const auto f = [&](double z) { return h(d.cdf(z)); };
    std::vector<double> cuts{lo, optimal_action(inst)};
    for (double k : d.kinks()) cuts.push_back(k);
    for (double v : levels) {
        if (v > 0.0 && v < 1.0) cuts.push_back(d.quantile(v));
    }
    // heavy tails decay algebraically in z; cut them at geometric levels
    for (double t = 1e-1; t >= 1e-9; t *= 1e-1) {
        cuts.push_back(d.quantile(t));
        cuts.push_back(d.quantile(1.0 - t));
    }
    if (std::isfinite(hi)) cuts.push_back(hi);
    std::vector<double> kept;
    for (double c : cuts) {
        if (c >= lo && c <= hi && std::isfinite(c)) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    const double abs_tol = kAbsFraction * rough_l1(f, kept);
    double total = integrate_pieces(f, kept, tol, abs_tol).value;
    if (!std::isfinite(hi)) total += integrate(f, kept.back(), kInf, tol, 15, abs_tol).value;
    return std::max(total, 0.0);
}

}  // namespace dnv
